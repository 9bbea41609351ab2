#include "mertens/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mertens/errors.hpp"

namespace mertens::emd {

namespace {

std::vector<KnotPoint> mirror_knots(std::span<const KnotPoint> points, std::size_t domain_length,
                                    int boundary) {
    const double last = static_cast<double>(domain_length - 1);
    const auto width = std::min<std::size_t>(static_cast<std::size_t>(std::max(boundary, 0)), points.size());
    std::vector<KnotPoint> knots;
    knots.reserve(points.size() + 2 * width);
    for (std::size_t i = width; i-- > 0;) {
        if (points[i].position > 0.0) knots.push_back({-points[i].position, points[i].value});
    }
    knots.insert(knots.end(), points.begin(), points.end());
    for (std::size_t j = 0; j < width; ++j) {
        const auto& p = points[points.size() - 1 - j];
        if (p.position < last) knots.push_back({2.0 * last - p.position, p.value});
    }
    return knots;
}

// Second derivatives of the natural cubic spline (zero at both ends).
std::vector<double> natural_second_derivatives(const std::vector<KnotPoint>& k) {
    const std::size_t n = k.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = k[i].position - k[i - 1].position;
        const double h1 = k[i + 1].position - k[i].position;
        diag[i - 1] = 2.0 * (h0 + h1);
        upper[i - 1] = h1;
        rhs[i - 1] = 6.0 * ((k[i + 1].value - k[i].value) / h1 - (k[i].value - k[i - 1].value) / h0);
    }
    // Thomas algorithm; the sub-diagonal entry of row i is h0 of that row.
    for (std::size_t i = 1; i < n - 2; ++i) {
        const double lower = k[i + 1].position - k[i].position;
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m[n - 2] = rhs[n - 3] / diag[n - 3];
    for (std::size_t i = n - 3; i-- > 0;) {
        m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }
    return m;
}

}  // namespace

Extrema find_extrema(std::span<const double> seq) {
    if (seq.size() < 3) throw precondition_error("find_extrema: need at least 3 samples");
    Extrema out;
    std::size_t i = 1;
    while (i + 1 < seq.size()) {
        std::size_t end = i;
        while (end + 1 < seq.size() && seq[end + 1] == seq[i]) ++end;
        if (end + 1 >= seq.size()) break;  // plateau reaches the last sample
        const double left = seq[i - 1];
        const double right = seq[end + 1];
        const double v = seq[i];
        const std::size_t mid = i + (end - i) / 2;
        if (v > left && v > right) out.maxima.push_back(mid);
        else if (v < left && v < right) out.minima.push_back(mid);
        i = end + 1;
    }
    return out;
}

std::size_t count_significant_extrema(std::span<const double> seq, double tolerance) {
    if (seq.size() < 3) return 0;
    // direction: +1 rising, -1 falling, 0 not yet decided. `peak` is the
    // running extreme in the current direction.
    int direction = 0;
    double peak = seq[0];
    double low = seq[0], high = seq[0];
    std::size_t count = 0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const double v = seq[i];
        if (direction == 0) {
            low = std::min(low, v);
            high = std::max(high, v);
            if (v - low > tolerance) direction = 1, peak = v;
            else if (high - v > tolerance) direction = -1, peak = v;
            continue;
        }
        if (direction > 0) {
            if (v > peak) peak = v;
            else if (peak - v > tolerance) ++count, direction = -1, peak = v;
        } else {
            if (v < peak) peak = v;
            else if (v - peak > tolerance) ++count, direction = 1, peak = v;
        }
    }
    return count;
}

std::size_t count_zero_crossings(std::span<const double> seq) {
    std::size_t crossings = 0;
    int previous = 0;
    for (const double v : seq) {
        const int sign = (v > 0.0) - (v < 0.0);
        if (sign == 0) continue;
        if (previous != 0 && sign != previous) ++crossings;
        previous = sign;
    }
    return crossings;
}

bool satisfies_imf_property(std::span<const double> seq) {
    const auto ext = find_extrema(seq);
    const auto extrema = static_cast<long long>(ext.maxima.size() + ext.minima.size());
    const auto crossings = static_cast<long long>(count_zero_crossings(seq));
    return std::llabs(extrema - crossings) <= 1;
}

std::vector<double> spline_envelope(std::span<const KnotPoint> points, std::size_t domain_length,
                                    int boundary) {
    if (domain_length == 0) throw precondition_error("spline_envelope: empty domain");
    if (points.empty()) throw precondition_error("spline_envelope: no points");
    const auto knots = mirror_knots(points, domain_length, boundary);
    if (knots.size() < 2) throw precondition_error("spline_envelope: fewer than two knots");

    std::vector<double> out(domain_length);
    if (knots.size() == 2) {
        const auto& a = knots[0];
        const auto& b = knots[1];
        const double slope = (b.value - a.value) / (b.position - a.position);
        for (std::size_t t = 0; t < domain_length; ++t) {
            out[t] = a.value + slope * (static_cast<double>(t) - a.position);
        }
        return out;
    }

    const auto m = natural_second_derivatives(knots);
    std::size_t seg = 0;
    for (std::size_t t = 0; t < domain_length; ++t) {
        const double x = static_cast<double>(t);
        while (seg + 2 < knots.size() && x > knots[seg + 1].position) ++seg;
        const auto& k0 = knots[seg];
        const auto& k1 = knots[seg + 1];
        const double h = k1.position - k0.position;
        const double a = k1.position - x;
        const double b = x - k0.position;
        out[t] = (m[seg] * a * a * a + m[seg + 1] * b * b * b) / (6.0 * h) +
                 (k0.value / h - m[seg] * h / 6.0) * a + (k1.value / h - m[seg + 1] * h / 6.0) * b;
    }
    return out;
}

double energy(std::span<const double> seq) noexcept {
    double e = 0.0;
    for (const double v : seq) e += v * v;
    return e;
}

ImfSet emd_decompose(std::span<const double> seq, const SiftConfig& config) {
    if (seq.size() < 16) throw precondition_error("emd_decompose: need at least 16 samples");
    if (!(config.sd_threshold > 0.0) || config.max_sifts < 1 || config.max_modes < 1) {
        throw precondition_error("emd_decompose: invalid sift configuration");
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!std::isfinite(seq[i])) {
            throw precondition_error("emd_decompose: non-finite value at position " + std::to_string(i));
        }
    }

    const std::size_t length = seq.size();
    ImfSet out;
    out.config_used = config;
    std::vector<double> remainder(seq.begin(), seq.end());
    std::vector<KnotPoint> knots;
    double scale = 0.0;
    for (const double v : seq) scale = std::max(scale, std::abs(v));
    const double trend_tolerance = kTrendTolerance * scale;

    const auto envelope = [&](const std::vector<std::size_t>& idx, const std::vector<double>& h) {
        knots.clear();
        for (const auto i : idx) knots.push_back({static_cast<double>(i), h[i]});
        return spline_envelope(knots, length, config.boundary);
    };

    while (static_cast<int>(out.modes.size()) < config.max_modes) {
        if (count_significant_extrema(remainder, trend_tolerance) < 2) break;

        std::vector<double> h = remainder;
        int sifts = 0;
        while (sifts < config.max_sifts) {
            const auto ext = find_extrema(h);
            if (ext.maxima.empty() || ext.minima.empty()) break;
            const auto upper = envelope(ext.maxima, h);
            const auto lower = envelope(ext.minima, h);
            double diff = 0.0;
            double base = 0.0;
            for (std::size_t i = 0; i < length; ++i) {
                const double mean = 0.5 * (upper[i] + lower[i]);
                diff += mean * mean;
                base += h[i] * h[i];
                h[i] -= mean;
            }
            ++sifts;
            const double sd = base > 0.0 ? diff / base : 0.0;
            if (sd < config.sd_threshold && satisfies_imf_property(h)) break;
        }

        for (std::size_t i = 0; i < length; ++i) remainder[i] -= h[i];
        out.modes.push_back(std::move(h));
        out.sift_counts.push_back(sifts);
    }
    out.residual = std::move(remainder);
    return out;
}

}  // namespace mertens::emd
