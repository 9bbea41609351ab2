#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mertens/core_tables.hpp"

namespace mertens::spectral {

enum class Window { rectangular, hann };

Window parse_window(std::string_view name);
std::string_view window_name(Window window) noexcept;

struct WelchOptions {
    std::size_t segment_length = std::size_t{1} << 20;  // power of two
    double overlap = 0.5;                               // fraction in [0, 1)
    Window window = Window::hann;
};

/// One-sided PSD at f = k / L for k = 1..L/2 (DC excluded), unit sample rate.
struct Spectrum {
    std::vector<double> frequencies;
    std::vector<double> power;
    std::size_t segment_length = 0;
    double overlap = 0.0;
    Window window = Window::hann;
    std::size_t segment_count = 0;
    // max over segments of |sum (w x)^2 - (1/L) sum |X_k|^2| / sum (w x)^2
    double parseval_max_rel_error = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    std::size_t points = 0;
};

/// In-place iterative radix-2 DFT (forward, no scaling). Size must be a power of two.
void fft(std::span<std::complex<double>> data);

/// Welch averaged periodogram: per segment the mean is removed, the window
/// applied and |X_k|^2 / sum(w^2) accumulated (doubled below Nyquist).
/// Segments are summed in order, so results are bit-stable.
Spectrum periodogram_welch(std::span<const double> sequence, const WelchOptions& options = {});

/// OLS of log10(power) on log10(frequency) over f_lo <= f <= f_hi.
/// Needs at least 10 points with positive power in the band.
SlopeFit fit_loglog_slope(const Spectrum& spectrum, double f_lo, double f_hi);

struct EnvelopeSample {
    std::uint64_t n = 0;
    std::int64_t abs_m = 0;
    double sqrt_n = 0.0;
    std::int64_t running_max = 0;  // max |M(k)| over k <= n
};

/// Samples at n = 1, every multiple of `stride`, and n = N.
std::vector<EnvelopeSample> envelope_series(const MertensTable& table, std::uint64_t stride);

}  // namespace mertens::spectral
