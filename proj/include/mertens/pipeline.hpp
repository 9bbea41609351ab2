#pragma once

// Reproduction pipeline behind the `mertens` CLI: table computation,
// oracle verification, analysis products and benchmarks.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mertens/core_tables.hpp"

namespace mertens::pipeline {

inline constexpr const char* kTablesEnv = "MERTENS_TABLES";
inline constexpr const char* kMobiusFile = "mobius.mtab";
inline constexpr const char* kMertensFile = "mertens.mtab";

/// Flat key-value settings (`psd.window = hann`). Later sources win.
class Settings {
public:
    static Settings from_file(const std::filesystem::path& path);
    static Settings parse(std::istream& in, const std::string& origin = "<input>");

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    void merge(const Settings& overrides);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;

private:
    std::map<std::string, std::string> values_;
};

enum class Algorithm { sieve, incremental, direct };
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);

struct RunConfig {
    std::uint64_t limit = 0;
    Algorithm algorithm = Algorithm::sieve;
    std::filesystem::path output_dir;
    std::filesystem::path checkpoint;       // incremental only; defaults to output_dir/incremental.ckpt
    std::uint64_t checkpoint_every = 1'000'000;
    std::optional<std::uint64_t> stop_after;  // incremental: save a checkpoint and stop here
    bool override_cap = false;                // direct: lift the 1e5 cap
    std::uint64_t seed = 0;

    static RunConfig from_settings(const Settings& settings);
    void validate() const;
};

enum class Match { pass, fail, info };

struct ClaimRow {
    std::string id;
    std::string expected;
    std::string computed;
    Match match = Match::info;
    double elapsed_seconds = 0.0;
};

class ReproductionReport {
public:
    /// Throws precondition_error if `row.id` is already present.
    void add(ClaimRow row);
    void add_exact(const std::string& id, std::int64_t expected, std::int64_t computed, double elapsed);
    void add_tolerance(const std::string& id, double expected, double computed, double tolerance, double elapsed);
    void add_info(const std::string& id, const std::string& computed, double elapsed);

    const std::vector<ClaimRow>& rows() const noexcept { return rows_; }
    bool has_failures() const noexcept;

    /// `claim,expected,computed,match,elapsed_s`
    void write_csv(std::ostream& out) const;
    void write_summary(std::ostream& out) const;

private:
    std::vector<ClaimRow> rows_;
};

/// Published reference pairs (n, M(n)).
const std::vector<std::pair<std::uint64_t, std::int64_t>>& reference_mertens_values();

struct ComputeResult {
    bool completed = true;          // false when stopped by stop_after
    std::uint64_t reached = 0;
    ReproductionReport report;
};

/// Builds the tables, writes mobius.mtab and mertens.mtab to the output
/// directory and records the published reference values inside the limit.
ComputeResult cmd_compute(const RunConfig& cfg, std::ostream& log);

struct VerifyOptions {
    std::uint64_t redheffer_max = 60;
    std::uint64_t farey_max = 300;
    std::uint64_t hyperbolic_max = 2000;
    std::uint64_t direct_max = 5000;
    std::uint64_t recursive_max = 100'000;  // both divisor scans vs the sieve
    std::optional<std::filesystem::path> tables;  // read mu from here instead of sieving
};

ReproductionReport cmd_verify(const VerifyOptions& options, std::ostream& log);

enum class AnalysisKind { zeros, extrema, stats, bounds, psd, emd, envelope };
AnalysisKind parse_analysis_kind(const std::string& name);
std::string analysis_kind_name(AnalysisKind kind);

struct AnalyzeOptions {
    std::filesystem::path tables;
    std::filesystem::path output_dir;  // defaults to `tables`
    Settings settings;                 // stride, alpha, n_min, psd.*, emd.*
};

/// Reads the tables (throwing an io_error that names `compute` when absent),
/// writes the CSV products of `kind` and returns its claim rows. The report is
/// also written to `report_<kind>.csv` in the output directory.
ReproductionReport cmd_analyze(AnalysisKind kind, const AnalyzeOptions& options, std::ostream& log);

struct BenchRow {
    std::string algorithm;
    std::uint64_t size = 0;
    std::optional<double> median_seconds;  // empty when skipped
    std::int64_t value = 0;                // M(size)
    std::string note;
};

std::vector<BenchRow> cmd_bench(const std::vector<Algorithm>& algos, const std::vector<std::uint64_t>& sizes,
                                int repetitions = 3);
void write_bench(std::ostream& out, const std::vector<BenchRow>& rows);

enum class ExportFormat { csv, binary };
enum class TableKind { mobius, mertens };

void cmd_export(const std::filesystem::path& tables, TableKind kind, ExportFormat format,
                const std::filesystem::path& destination);

}  // namespace mertens::pipeline
