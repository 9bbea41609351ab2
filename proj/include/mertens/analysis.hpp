#pragma once

#include <cstdint>
#include <vector>

#include "mertens/core_tables.hpp"

namespace mertens::analysis {

struct ZeroList {
    std::vector<std::uint64_t> indices;  // strictly increasing n with M(n) = 0
    std::uint64_t source_limit = 0;
};

enum class ExtremumKind { maximum, minimum };

/// Extremum of M strictly between two zeros.
struct ExtremumRecord {
    std::uint64_t left_zero = 0;
    std::uint64_t right_zero = 0;
    std::int64_t value = 0;
    std::vector<std::uint64_t> attained_at;  // sorted
    ExtremumKind kind = ExtremumKind::maximum;
};

/// Which runs of nonzero M count as segments.
enum class SegmentConvention {
    between_zeros,       // only runs bounded by two zeros
    include_open_ends,   // also the run before the first zero and after the last
};

struct GlobalExtrema {
    std::int64_t max_value = 0;
    std::vector<std::uint64_t> max_at;
    std::int64_t min_value = 0;
    std::vector<std::uint64_t> min_at;
};

/// r1 = Q(n)/n - |M(n)|/n and r2 = Q(n)/n - M(n)/n, Q = squarefree count.
struct RatioSeries {
    std::vector<std::uint64_t> n;
    std::vector<double> r1;
    std::vector<double> r2;
};

struct BoundCheckReport {
    double alpha = 0.0;
    double k_quantile = 0.0;  // K_{alpha/2}
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    // M(n) > sqrt(6/pi^2) K sqrt(n); the two-sided variant tests |M(n)|.
    std::uint64_t exceed_count_normal = 0;
    std::uint64_t exceed_count_normal_two_sided = 0;
    // M(n) > sqrt(6/pi^2) / sqrt(alpha) sqrt(n)
    std::uint64_t exceed_count_chebyshev = 0;
    std::uint64_t exceed_count_chebyshev_two_sided = 0;
    double max_ratio = 0.0;  // max |M(n)| / sqrt(n)
    std::uint64_t argmax_ratio = 0;
    // |M(n)| > 0.5 sqrt(n) for n >= 10 and |M(n)| > 0.1333 sqrt(n) for n >= 1664.
    std::uint64_t violations_half = 0;
    std::uint64_t violations_tight = 0;
    std::vector<std::uint64_t> first_violations_half;  // at most 32, ascending
};

/// 6/pi^2 as 6/(pi*pi) in double precision.
double squarefree_density() noexcept;

ZeroList find_zeros(const MertensTable& table);
std::uint64_t count_mobius_zeros(const MobiusTable& table);

std::vector<ExtremumRecord> segment_extrema(const MertensTable& table, const ZeroList& zeros,
                                            SegmentConvention convention = SegmentConvention::between_zeros);

GlobalExtrema global_extrema(const MertensTable& table);

/// Samples every `stride` indices and always at n = N.
RatioSeries ratio_series(const MobiusTable& mobius, const MertensTable& mertens, std::uint64_t stride);

/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against the erfc-based CDF. Requires 0 < p < 1.
double normal_quantile(double p);

/// Scans n in [n_min, N]. Requires 0 < alpha < 1 and 1 <= n_min <= N.
BoundCheckReport bound_check(const MertensTable& table, double alpha, std::uint64_t n_min);

}  // namespace mertens::analysis
