// mertens: compute, verify and analyze Möbius/Mertens tables.
//
// Exit codes: 0 success, 1 claim mismatch, 2 usage error, 3 I/O or integrity error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mertens/errors.hpp"
#include "mertens/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mertens;
using namespace mertens::pipeline;

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string default_tables_dir() {
    if (const char* env = std::getenv(kTablesEnv)) return env;
    return "tables";
}

template <typename T>
std::vector<T> split_list(const std::string& text, T (*parse)(const std::string&)) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse(item));
    }
    return out;
}

std::uint64_t parse_size(const std::string& s) {
    Settings tmp;
    tmp.set("size", s);
    return tmp.get_u64("size", 0);
}

Algorithm parse_algo(const std::string& s) { return parse_algorithm(s); }

int report_exit(const ReproductionReport& report) { return report.has_failures() ? kExitMismatch : 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Möbius and Mertens function tables, oracles and analyses"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value settings file; flags take precedence");

    // Flags are collected into Settings so they can override the config file.
    Settings flags;
    const auto bind = [&flags](CLI::App* cmd, const std::string& flag, const std::string& key,
                               const std::string& help) {
        return cmd->add_option_function<std::string>(
            flag, [&flags, key](const std::string& v) { flags.set(key, v); }, help);
    };

    auto* compute = app.add_subcommand("compute", "build mu and M tables up to N");
    bind(compute, "--n", "n", "table limit N");
    bind(compute, "--algo", "algo", "sieve | incremental | direct");
    bind(compute, "--out", "out", "output directory");
    bind(compute, "--checkpoint", "checkpoint", "incremental checkpoint file");
    bind(compute, "--checkpoint-every", "checkpoint_every", "checkpoint cadence in indices");
    bind(compute, "--stop-after", "stop_after", "incremental: checkpoint and stop at this index");
    compute->add_flag_callback("--override-cap", [&flags] { flags.set("override_cap", "true"); },
                               "allow direct above n = 1e5");

    auto* verify = app.add_subcommand("verify", "check every oracle against the sieve");
    VerifyOptions vopts;
    std::string verify_tables;
    verify->add_option("--redheffer-max", vopts.redheffer_max);
    verify->add_option("--farey-max", vopts.farey_max);
    verify->add_option("--hyperbolic-max", vopts.hyperbolic_max);
    verify->add_option("--direct-max", vopts.direct_max);
    verify->add_option("--recursive-max", vopts.recursive_max);
    verify->add_option("--tables", verify_tables, "read the reference mu table from this directory");

    auto* analyze = app.add_subcommand("analyze", "write analysis CSVs and claim rows");
    std::string kind_name;
    std::string analyze_tables = default_tables_dir();
    std::string analyze_out;
    analyze->add_option("kind", kind_name, "zeros|extrema|stats|bounds|psd|emd|envelope")->required();
    analyze->add_option("--tables", analyze_tables, "table directory (default $MERTENS_TABLES or ./tables)");
    analyze->add_option("--out", analyze_out, "output directory (default: table directory)");
    bind(analyze, "--stride", "stride", "sampling stride for ratios/envelope");
    bind(analyze, "--alpha", "alpha", "bound check probability level");
    bind(analyze, "--n-min", "n_min", "bound check lower index");
    std::vector<std::string> overrides;
    analyze->add_option("--set", overrides, "module override key=value (psd.*, emd.*)");

    auto* bench = app.add_subcommand("bench", "time the algorithms");
    std::string bench_algos = "sieve,incremental,direct";
    std::string bench_sizes = "10000";
    int reps = 3;
    bench->add_option("--algos", bench_algos);
    bench->add_option("--sizes", bench_sizes);
    bench->add_option("--reps", reps);

    auto* exporter = app.add_subcommand("export", "export a stored table");
    std::string format = "csv";
    std::string export_kind = "mertens";
    std::string export_tables = default_tables_dir();
    std::string export_out;
    exporter->add_option("--format", format)->check(CLI::IsMember({"csv", "binary"}));
    exporter->add_option("--kind", export_kind)->check(CLI::IsMember({"mobius", "mertens"}));
    exporter->add_option("--tables", export_tables);
    exporter->add_option("--out", export_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        Settings settings;
        if (!config_path.empty()) settings = Settings::from_file(config_path);
        for (const auto& kv : overrides) {
            std::istringstream line(kv);
            settings.merge(Settings::parse(line, "--set"));
        }
        settings.merge(flags);

        if (*compute) {
            if (!settings.contains("n")) throw precondition_error("compute: --n is required");
            if (!settings.contains("out")) settings.set("out", default_tables_dir());
            const auto result = cmd_compute(RunConfig::from_settings(settings), std::cout);
            if (!result.completed) return 0;
            return report_exit(result.report);
        }
        if (*verify) {
            if (!verify_tables.empty()) vopts.tables = verify_tables;
            const auto report = cmd_verify(vopts, std::cout);
            report.write_summary(std::cout);
            return report_exit(report);
        }
        if (*analyze) {
            AnalyzeOptions opts{analyze_tables, analyze_out, settings};
            return report_exit(cmd_analyze(parse_analysis_kind(kind_name), opts, std::cout));
        }
        if (*bench) {
            const auto rows = cmd_bench(split_list<Algorithm>(bench_algos, parse_algo),
                                        split_list<std::uint64_t>(bench_sizes, parse_size), reps);
            write_bench(std::cout, rows);
            return 0;
        }
        if (*exporter) {
            cmd_export(export_tables, export_kind == "mobius" ? TableKind::mobius : TableKind::mertens,
                       format == "csv" ? ExportFormat::csv : ExportFormat::binary, export_out);
            return 0;
        }
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const integrity_error& e) {
        std::cerr << "integrity error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMismatch;
    }
    return 0;
}
