#include "mertens/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace mertens::csv {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_zeros(std::ostream& out, const analysis::ZeroList& zeros) {
    out << "n\n";
    for (const auto n : zeros.indices) out << n << '\n';
}

void write_extrema(std::ostream& out, const std::vector<analysis::ExtremumRecord>& records) {
    out << "left_zero,right_zero,kind,value,first_attained,attain_count\n";
    for (const auto& r : records) {
        out << r.left_zero << ',' << r.right_zero << ','
            << (r.kind == analysis::ExtremumKind::maximum ? "max" : "min") << ',' << r.value << ','
            << r.attained_at.front() << ',' << r.attained_at.size() << '\n';
    }
}

void write_ratios(std::ostream& out, const analysis::RatioSeries& series) {
    out << "n,r1,r2\n";
    for (std::size_t i = 0; i < series.n.size(); ++i) {
        out << series.n[i] << ',' << format_double(series.r1[i]) << ',' << format_double(series.r2[i]) << '\n';
    }
}

void write_bound_report(std::ostream& out, const analysis::BoundCheckReport& r) {
    out << "key,value\n";
    out << "alpha," << format_double(r.alpha) << '\n';
    out << "k_quantile," << format_double(r.k_quantile) << '\n';
    out << "n_min," << r.n_min << '\n';
    out << "n_max," << r.n_max << '\n';
    out << "exceed_count_normal," << r.exceed_count_normal << '\n';
    out << "exceed_count_normal_two_sided," << r.exceed_count_normal_two_sided << '\n';
    out << "exceed_count_chebyshev," << r.exceed_count_chebyshev << '\n';
    out << "exceed_count_chebyshev_two_sided," << r.exceed_count_chebyshev_two_sided << '\n';
    out << "max_ratio," << format_double(r.max_ratio) << '\n';
    out << "argmax_ratio," << r.argmax_ratio << '\n';
    out << "violations_0.5_sqrt_n," << r.violations_half << '\n';
    out << "violations_0.1333_sqrt_n," << r.violations_tight << '\n';
}

void write_spectrum(std::ostream& out, const spectral::Spectrum& spectrum) {
    out << "frequency,power\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        out << format_double(spectrum.frequencies[i]) << ',' << format_double(spectrum.power[i]) << '\n';
    }
}

void write_fit(std::ostream& out, const spectral::Spectrum& spectrum, const spectral::SlopeFit& fit) {
    out << "log10f,log10P,fit\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        const double f = spectrum.frequencies[i];
        if (f < fit.f_lo || f > fit.f_hi || !(spectrum.power[i] > 0.0)) continue;
        const double lf = std::log10(f);
        out << format_double(lf) << ',' << format_double(std::log10(spectrum.power[i])) << ','
            << format_double(fit.intercept + fit.slope * lf) << '\n';
    }
}

void write_envelope(std::ostream& out, const std::vector<spectral::EnvelopeSample>& samples) {
    out << "n,abs_m,sqrt_n,running_max\n";
    for (const auto& s : samples) {
        out << s.n << ',' << s.abs_m << ',' << format_double(s.sqrt_n) << ',' << s.running_max << '\n';
    }
}

void write_sequence(std::ostream& out, const std::vector<double>& values, std::size_t stride) {
    out << "n,value\n";
    if (stride == 0) stride = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t n = i + 1;
        if (n % stride != 0 && n != 1 && n != values.size()) continue;
        out << n << ',' << format_double(values[i]) << '\n';
    }
}

void write_emd_manifest(std::ostream& out, const emd::ImfSet& set) {
    out << "mode,energy,sifts,extrema,zero_crossings\n";
    for (std::size_t m = 0; m < set.modes.size(); ++m) {
        const auto ext = emd::find_extrema(set.modes[m]);
        out << (m + 1) << ',' << format_double(emd::energy(set.modes[m])) << ',' << set.sift_counts[m] << ','
            << (ext.maxima.size() + ext.minima.size()) << ',' << emd::count_zero_crossings(set.modes[m]) << '\n';
    }
    const auto ext = emd::find_extrema(set.residual);
    out << "residual," << format_double(emd::energy(set.residual)) << ",0,"
        << (ext.maxima.size() + ext.minima.size()) << ',' << emd::count_zero_crossings(set.residual) << '\n';
}

}  // namespace mertens::csv
