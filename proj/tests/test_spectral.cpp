#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mertens/errors.hpp"
#include "mertens/spectral.hpp"

using namespace mertens;
using namespace mertens::spectral;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k % n) /
                                              static_cast<double>(n));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("fft matches a direct DFT") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 512; n *= 2) {
        std::vector<std::complex<double>> x(n);
        for (auto& v : x) v = {u(rng), u(rng)};
        const auto expected = naive_dft(x);
        auto got = x;
        fft(got);
        for (std::size_t k = 0; k < n; ++k) REQUIRE(std::abs(got[k] - expected[k]) < 1e-9 * static_cast<double>(n));
    }
    std::vector<std::complex<double>> bad(12);
    CHECK_THROWS_AS(fft(bad), precondition_error);
}

TEST_CASE("constant input has no power") {
    const std::vector<double> c(4096, 3.7);
    const auto s = periodogram_welch(c, {.segment_length = 1024, .overlap = 0.5, .window = Window::hann});
    const double scale = 3.7 * 3.7 * 1024;
    for (const double p : s.power) CHECK(p <= 1e-20 * scale);
}

TEST_CASE("bin-aligned cosine concentrates at its frequency") {
    constexpr std::size_t n = 1024;
    constexpr std::size_t bin = 37;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(bin * i) / static_cast<double>(n));
    }
    const auto s = periodogram_welch(x, {.segment_length = n, .overlap = 0.0, .window = Window::rectangular});
    CHECK(s.segment_count == 1);
    double total = 0.0;
    for (const double p : s.power) total += p;
    CHECK(s.frequencies[bin - 1] == doctest::Approx(37.0 / 1024.0));
    CHECK(s.power[bin - 1] / total > 0.99);
}

TEST_CASE("spectrum shape and Parseval") {
    const auto x = white_noise(10'000, 1);
    const auto s = periodogram_welch(x, {.segment_length = 2048, .overlap = 0.5, .window = Window::hann});
    CHECK(s.frequencies.size() == 1024);
    CHECK(s.segment_count == 8);
    CHECK(s.frequencies.front() > 0.0);
    CHECK(s.frequencies.back() == 0.5);
    CHECK(std::is_sorted(s.frequencies.begin(), s.frequencies.end()));
    for (const double p : s.power) CHECK((p >= 0.0 && std::isfinite(p)));
    CHECK(s.parseval_max_rel_error <= 1e-6);

    const auto r = periodogram_welch(x, {.segment_length = 2048, .overlap = 0.0, .window = Window::rectangular});
    CHECK(r.segment_count == 4);
    CHECK(r.parseval_max_rel_error <= 1e-6);
}

TEST_CASE("adding a constant leaves the spectrum unchanged") {
    std::mt19937_64 rng(9);
    std::vector<double> walk(1 << 14);
    double level = 0.0;
    for (auto& v : walk) {
        level += static_cast<double>(static_cast<int>(rng() % 3) - 1);
        v = level;
    }
    auto shifted = walk;
    for (auto& v : shifted) v += 1000.0;
    const WelchOptions opts{.segment_length = 2048, .overlap = 0.5, .window = Window::hann};
    CHECK(periodogram_welch(walk, opts).power == periodogram_welch(shifted, opts).power);
}

TEST_CASE("more averaging keeps the band-averaged level of white noise") {
    const auto x = white_noise(1 << 17, 21);
    const WelchOptions opts{.segment_length = 1024, .overlap = 0.0, .window = Window::hann};
    const auto half = periodogram_welch(std::span(x).first(x.size() / 2), opts);
    const auto full = periodogram_welch(x, opts);
    CHECK(full.segment_count == 2 * half.segment_count);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < half.power.size(); ++i) {
        a += half.power[i];
        b += full.power[i];
    }
    CHECK(std::abs(a - b) / a < 0.1);
}

TEST_CASE("log-log slope fit") {
    Spectrum exact;
    for (int k = 1; k <= 1000; ++k) {
        const double f = k / 2000.0;
        exact.frequencies.push_back(f);
        exact.power.push_back(1.0 / (f * f));
    }
    const auto fit = fit_loglog_slope(exact, 1e-3, 0.5);
    CHECK(std::abs(fit.slope + 2.0) < 1e-9);
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.points == 999);  // f = 0.0005 lies below the band

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto noise = periodogram_welch(white_noise(1 << 16, seed),
                                             {.segment_length = 1024, .overlap = 0.5, .window = Window::hann});
        const auto flat = fit_loglog_slope(noise, 1e-3, 0.5);
        CHECK(std::abs(flat.slope) < 0.1);
        CHECK((flat.r2 >= 0.0 && flat.r2 <= 1.0));
    }

    CHECK_THROWS_AS(fit_loglog_slope(exact, 0.9, 1.0), precondition_error);
    CHECK_THROWS_AS(fit_loglog_slope(exact, 1e-3, 4e-3), precondition_error);
}

TEST_CASE("welch preconditions") {
    const std::vector<double> x(100, 1.0);
    CHECK_THROWS_AS(periodogram_welch(x, {.segment_length = 128}), precondition_error);
    CHECK_THROWS_AS(periodogram_welch(x, {.segment_length = 48}), precondition_error);
    CHECK_THROWS_AS(periodogram_welch(x, {.segment_length = 64, .overlap = 1.0}), precondition_error);
    CHECK(parse_window("hann") == Window::hann);
    CHECK_THROWS_AS(parse_window("kaiser"), precondition_error);
}

TEST_CASE("envelope series") {
    const auto m = mertens_from_mobius(mobius_sieve(10'000));
    const auto env = envelope_series(m, 1000);
    REQUIRE(env.size() == 11);
    CHECK(env.front().n == 1);
    CHECK(env.front().abs_m == 1);
    CHECK(env.front().sqrt_n == 1.0);
    CHECK(env.front().running_max == 1);
    CHECK(env.back().n == 10'000);
    CHECK(env.back().abs_m == 23);
    CHECK(env.back().sqrt_n == 100.0);

    std::int64_t running = 0;
    for (std::uint64_t n = 1; n <= 10'000; ++n) running = std::max<std::int64_t>(running, std::abs(m[n]));
    CHECK(env.back().running_max == running);
    for (std::size_t i = 1; i < env.size(); ++i) CHECK(env[i].running_max >= env[i - 1].running_max);
    CHECK_THROWS_AS(envelope_series(m, 0), precondition_error);
}
