#include "mertens/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mertens/errors.hpp"

namespace mertens::analysis {

namespace {

// Acklam's coefficients for the central and tail regions.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                         1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                         6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                         -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                         3.754408661907416e+00};
constexpr double kTailSplit = 0.02425;

double tail_rational(double q) {
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
}

double acklam(double p) {
    if (p < kTailSplit) return tail_rational(std::sqrt(-2.0 * std::log(p)));
    if (p > 1.0 - kTailSplit) return -tail_rational(std::sqrt(-2.0 * std::log1p(-p)));
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double squarefree_density() noexcept { return 6.0 / (std::numbers::pi * std::numbers::pi); }

ZeroList find_zeros(const MertensTable& table) {
    ZeroList zeros;
    zeros.source_limit = table.limit();
    const auto m = table.values();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) zeros.indices.push_back(i + 1);
    }
    return zeros;
}

std::uint64_t count_mobius_zeros(const MobiusTable& table) {
    const auto mu = table.values();
    return static_cast<std::uint64_t>(std::count(mu.begin(), mu.end(), std::int8_t{0}));
}

std::vector<ExtremumRecord> segment_extrema(const MertensTable& table, const ZeroList& zeros,
                                            SegmentConvention convention) {
    if (zeros.source_limit != table.limit()) {
        throw precondition_error("segment_extrema: zero list was built from a different table");
    }

    // Open interval (left, right); left = 0 or right = N + 1 mark open ends.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
    const auto& z = zeros.indices;
    const bool open_ends = convention == SegmentConvention::include_open_ends;
    if (open_ends) {
        segments.emplace_back(0, z.empty() ? table.limit() + 1 : z.front());
    }
    for (std::size_t i = 0; i + 1 < z.size(); ++i) segments.emplace_back(z[i], z[i + 1]);
    if (open_ends && !z.empty()) segments.emplace_back(z.back(), table.limit() + 1);

    std::vector<ExtremumRecord> records;
    for (const auto& [left, right] : segments) {
        if (right - left < 2) continue;
        ExtremumRecord rec;
        rec.left_zero = left;
        rec.right_zero = right;
        const bool positive = table[left + 1] > 0;
        rec.kind = positive ? ExtremumKind::maximum : ExtremumKind::minimum;
        rec.value = table[left + 1];
        for (std::uint64_t n = left + 1; n < right; ++n) {
            const std::int64_t v = table[n];
            if ((v > 0) != positive || v == 0) {
                throw integrity_error("segment_extrema: sign change inside segment at n=" + std::to_string(n));
            }
            if (positive ? v > rec.value : v < rec.value) {
                rec.value = v;
                rec.attained_at.clear();
            }
            if (v == rec.value) rec.attained_at.push_back(n);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

GlobalExtrema global_extrema(const MertensTable& table) {
    GlobalExtrema g;
    const auto m = table.values();
    g.max_value = *std::max_element(m.begin(), m.end());
    g.min_value = *std::min_element(m.begin(), m.end());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == g.max_value) g.max_at.push_back(i + 1);
        if (m[i] == g.min_value) g.min_at.push_back(i + 1);
    }
    return g;
}

RatioSeries ratio_series(const MobiusTable& mobius, const MertensTable& mertens, std::uint64_t stride) {
    if (stride < 1) throw precondition_error("ratio_series: stride must be >= 1");
    if (mobius.limit() != mertens.limit()) {
        throw precondition_error("ratio_series: tables have different limits");
    }
    RatioSeries out;
    const std::uint64_t limit = mobius.limit();
    std::int64_t squarefree = 0;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        squarefree += mobius[n] != 0;
        if (n % stride != 0 && n != limit) continue;
        const std::int64_t m = mertens[n];
        const double dn = static_cast<double>(n);
        out.n.push_back(n);
        out.r1.push_back(static_cast<double>(squarefree - std::abs(m)) / dn);
        out.r2.push_back(static_cast<double>(squarefree - m) / dn);
    }
    return out;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw precondition_error("normal_quantile: p must lie in (0, 1)");
    double x = acklam(p);
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

BoundCheckReport bound_check(const MertensTable& table, double alpha, std::uint64_t n_min) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw precondition_error("bound_check: alpha must lie in (0, 1)");
    if (n_min < 1 || n_min > table.limit()) {
        throw precondition_error("bound_check: n_min=" + std::to_string(n_min) + " outside 1.." +
                                 std::to_string(table.limit()));
    }

    BoundCheckReport r;
    r.alpha = alpha;
    r.k_quantile = normal_quantile(1.0 - alpha / 2.0);
    r.n_min = n_min;
    r.n_max = table.limit();

    const double scale = std::sqrt(squarefree_density());
    const double coeff_normal = scale * r.k_quantile;
    const double coeff_chebyshev = scale / std::sqrt(alpha);

    for (std::uint64_t n = n_min; n <= r.n_max; ++n) {
        const std::int64_t m = table[n];
        const double root = std::sqrt(static_cast<double>(n));
        const double mag = static_cast<double>(std::abs(m));
        const double v = static_cast<double>(m);
        r.exceed_count_normal += v > coeff_normal * root;
        r.exceed_count_normal_two_sided += mag > coeff_normal * root;
        r.exceed_count_chebyshev += v > coeff_chebyshev * root;
        r.exceed_count_chebyshev_two_sided += mag > coeff_chebyshev * root;
        const double ratio = mag / root;
        if (ratio > r.max_ratio) {
            r.max_ratio = ratio;
            r.argmax_ratio = n;
        }
        if (n >= 10 && mag > 0.5 * root) {
            ++r.violations_half;
            if (r.first_violations_half.size() < 32) r.first_violations_half.push_back(n);
        }
        if (n >= 1664 && mag > 0.1333 * root) ++r.violations_tight;
    }
    return r;
}

}  // namespace mertens::analysis
