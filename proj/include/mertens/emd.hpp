#pragma once

// Empirical mode decomposition by cubic-spline envelope sifting.
// Positions are 0-based sample indices throughout.

#include <cstddef>
#include <span>
#include <vector>

namespace mertens::emd {

struct SiftConfig {
    double sd_threshold = 0.2;  // sum (h_prev - h)^2 / sum h_prev^2
    int max_sifts = 1000;       // per mode; sifting also waits for the IMF property
    int max_modes = 32;
    int boundary = 2;           // extrema mirrored about each end
};

struct Extrema {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

struct KnotPoint {
    double position;
    double value;
};

struct ImfSet {
    std::vector<std::vector<double>> modes;  // fastest first
    std::vector<double> residual;
    SiftConfig config_used;
    std::vector<int> sift_counts;  // per mode
};

/// Interior strict extrema. A plateau counts once, at its midpoint (the lower
/// of the two middle indices for even lengths). Plateaus touching either end
/// are not extrema. Requires at least 3 samples.
Extrema find_extrema(std::span<const double> seq);

/// Interior turning points whose swing exceeds `tolerance` on both sides
/// (hysteresis count). With tolerance 0 this matches find_extrema's count.
std::size_t count_significant_extrema(std::span<const double> seq, double tolerance);

/// Number of sign changes, skipping exact zeros.
std::size_t count_zero_crossings(std::span<const double> seq);

/// |#extrema - #zero crossings| <= 1.
bool satisfies_imf_property(std::span<const double> seq);

/// Natural cubic spline through `points` (ascending positions) evaluated at
/// 0..domain_length-1. The first and last `boundary` points are first mirrored
/// about positions 0 and domain_length-1. Two knots give a straight line.
/// Throws precondition_error when fewer than two knots remain.
std::vector<double> spline_envelope(std::span<const KnotPoint> points, std::size_t domain_length,
                                    int boundary = 0);

/// Requires at least 16 finite samples. Decomposition stops when the remainder
/// has fewer than 2 extrema swinging more than kTrendTolerance * max|seq|;
/// smaller wiggles are floating-point residue of the subtractions.
inline constexpr double kTrendTolerance = 1e-10;
ImfSet emd_decompose(std::span<const double> seq, const SiftConfig& config = {});

double energy(std::span<const double> seq) noexcept;

}  // namespace mertens::emd
