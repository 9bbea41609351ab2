#include "mertens/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "mertens/errors.hpp"

namespace mertens::spectral {

namespace {

std::vector<double> make_window(Window window, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (window == Window::hann) {
        // Periodic Hann, the usual choice for spectral estimation.
        for (std::size_t i = 0; i < length; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                        static_cast<double>(length));
        }
    }
    return w;
}

}  // namespace

Window parse_window(std::string_view name) {
    if (name == "hann") return Window::hann;
    if (name == "rectangular" || name == "boxcar") return Window::rectangular;
    throw precondition_error("unknown window '" + std::string(name) + "'");
}

std::string_view window_name(Window window) noexcept {
    return window == Window::hann ? "hann" : "rectangular";
}

void fft(std::span<std::complex<double>> data) {
    const std::size_t n = data.size();
    if (n == 0 || !std::has_single_bit(n)) throw precondition_error("fft: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles computed directly per index to avoid drift from repeated products.
        std::vector<std::complex<double>> twiddle(half);
        for (std::size_t k = 0; k < half; ++k) {
            twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                             static_cast<double>(len));
        }
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto u = data[start + k];
                const auto v = data[start + k + half] * twiddle[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

Spectrum periodogram_welch(std::span<const double> sequence, const WelchOptions& options) {
    const std::size_t length = options.segment_length;
    if (length < 2 || !std::has_single_bit(length)) {
        throw precondition_error("periodogram_welch: segment_length must be a power of two >= 2");
    }
    if (length > sequence.size()) {
        throw precondition_error("periodogram_welch: segment_length " + std::to_string(length) +
                                 " exceeds sequence length " + std::to_string(sequence.size()));
    }
    if (!(options.overlap >= 0.0 && options.overlap < 1.0)) {
        throw precondition_error("periodogram_welch: overlap must lie in [0, 1)");
    }

    const auto window = make_window(options.window, length);
    double window_power = 0.0;
    for (const double w : window) window_power += w * w;

    const auto overlap_samples = static_cast<std::size_t>(std::llround(options.overlap * static_cast<double>(length)));
    const std::size_t hop = std::max<std::size_t>(1, length - overlap_samples);
    const std::size_t half = length / 2;

    Spectrum out;
    out.segment_length = length;
    out.overlap = options.overlap;
    out.window = options.window;
    out.power.assign(half, 0.0);

    std::vector<std::complex<double>> buffer(length);
    for (std::size_t start = 0; start + length <= sequence.size(); start += hop) {
        const auto segment = sequence.subspan(start, length);
        double mean = 0.0;
        for (const double v : segment) mean += v;
        mean /= static_cast<double>(length);

        double energy = 0.0;
        for (std::size_t i = 0; i < length; ++i) {
            const double v = (segment[i] - mean) * window[i];
            energy += v * v;
            buffer[i] = {v, 0.0};
        }
        fft(buffer);

        double spectral_sum = 0.0;
        for (const auto& x : buffer) spectral_sum += std::norm(x);
        spectral_sum /= static_cast<double>(length);
        if (energy > 0.0) {
            out.parseval_max_rel_error =
                std::max(out.parseval_max_rel_error, std::abs(energy - spectral_sum) / energy);
        }

        for (std::size_t k = 1; k <= half; ++k) {
            const double scale = k == half ? 1.0 : 2.0;
            out.power[k - 1] += scale * std::norm(buffer[k]) / window_power;
        }
        ++out.segment_count;
    }

    const double segments = static_cast<double>(out.segment_count);
    out.frequencies.resize(half);
    for (std::size_t k = 1; k <= half; ++k) {
        out.frequencies[k - 1] = static_cast<double>(k) / static_cast<double>(length);
        out.power[k - 1] /= segments;
    }
    return out;
}

SlopeFit fit_loglog_slope(const Spectrum& spectrum, double f_lo, double f_hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        const double f = spectrum.frequencies[i];
        if (f < f_lo || f > f_hi || !(spectrum.power[i] > 0.0)) continue;
        xs.push_back(std::log10(f));
        ys.push_back(std::log10(spectrum.power[i]));
    }
    if (xs.size() < 10) {
        throw precondition_error("fit_loglog_slope: band [" + std::to_string(f_lo) + ", " +
                                 std::to_string(f_hi) + "] holds " + std::to_string(xs.size()) +
                                 " usable points, need 10");
    }

    const double count = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double residual = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        residual += e * e;
    }
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - residual / syy, 0.0, 1.0) : 0.0;
    fit.f_lo = f_lo;
    fit.f_hi = f_hi;
    fit.points = xs.size();
    return fit;
}

std::vector<EnvelopeSample> envelope_series(const MertensTable& table, std::uint64_t stride) {
    if (stride < 1) throw precondition_error("envelope_series: stride must be >= 1");
    std::vector<EnvelopeSample> out;
    std::int64_t running = 0;
    for (std::uint64_t n = 1; n <= table.limit(); ++n) {
        const std::int64_t mag = std::abs(table[n]);
        running = std::max(running, mag);
        if (n == 1 || n % stride == 0 || n == table.limit()) {
            out.push_back({n, mag, std::sqrt(static_cast<double>(n)), running});
        }
    }
    return out;
}

}  // namespace mertens::spectral
