#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mertens/core_tables.hpp"
#include "mertens/emd.hpp"
#include "mertens/errors.hpp"

using namespace mertens;
using namespace mertens::emd;

namespace {

std::vector<double> tone(std::size_t n, double period, double amplitude = 1.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period);
    return v;
}

double max_reconstruction_error(std::span<const double> input, const ImfSet& set) {
    double worst = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        double sum = set.residual[i];
        for (const auto& m : set.modes) sum += m[i];
        worst = std::max(worst, std::abs(sum - input[i]));
    }
    return worst;
}

// Mean period from zero crossings: two crossings per cycle.
double zero_crossing_period(const std::vector<double>& v) {
    return 2.0 * static_cast<double>(v.size()) / static_cast<double>(count_zero_crossings(v));
}

}  // namespace

TEST_CASE("find_extrema") {
    const std::vector<double> peak = {0, 1, 0};
    CHECK(find_extrema(peak).maxima == std::vector<std::size_t>{1});
    CHECK(find_extrema(peak).minima.empty());

    const std::vector<double> plateau = {0, 1, 1, 0};
    CHECK(find_extrema(plateau).maxima == std::vector<std::size_t>{1});
    const std::vector<double> odd_plateau = {3, 2, 2, 2, 5};
    CHECK(find_extrema(odd_plateau).minima == std::vector<std::size_t>{2});
    const std::vector<double> edge_plateau = {0, 1, 1, 1};
    CHECK(find_extrema(edge_plateau).maxima.empty());
    const std::vector<double> shoulder = {0, 1, 1, 2, 0};
    CHECK(find_extrema(shoulder).maxima == std::vector<std::size_t>{3});
    CHECK(find_extrema(shoulder).minima.empty());

    const auto s = tone(300, 100.0);
    const auto ext = find_extrema(s);
    CHECK(ext.maxima == std::vector<std::size_t>{25, 125, 225});
    CHECK(ext.minima == std::vector<std::size_t>{75, 175, 275});

    const std::vector<double> two = {1, 2};
    CHECK_THROWS_AS(find_extrema(two), precondition_error);
}

TEST_CASE("significant extrema ignore small wiggles") {
    const auto s = tone(300, 100.0);
    CHECK(count_significant_extrema(s, 0.0) == 6);
    std::vector<double> ramp(200);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i) + ((i % 2) ? 1e-12 : -1e-12);
    CHECK(count_significant_extrema(ramp, 0.0) == 0);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1.0 + ((i % 2) ? 1e-12 : -1e-12);
    CHECK(count_significant_extrema(ramp, 0.0) == 198);
    CHECK(count_significant_extrema(ramp, 1e-9) == 0);
    const std::vector<double> plateau = {0, 1, 1, 0, 0, 2};
    CHECK(count_significant_extrema(plateau, 0.0) == 2);
}

TEST_CASE("zero crossings skip exact zeros") {
    const std::vector<double> v = {1, 0, -1, 0, 0, -2, 3, 0, 4};
    CHECK(count_zero_crossings(v) == 2);
    CHECK(satisfies_imf_property(tone(400, 100.0)));
}

TEST_CASE("spline envelope") {
    const std::vector<KnotPoint> ends = {{0.0, 0.0}, {99.0, 0.0}};
    for (const double v : spline_envelope(ends, 100, 2)) CHECK(v == 0.0);

    const std::vector<KnotPoint> line = {{0.0, 1.0}, {10.0, 3.0}, {40.0, 9.0}};
    const auto lin = spline_envelope(line, 50, 0);
    for (std::size_t t = 0; t < lin.size(); ++t) CHECK(std::abs(lin[t] - (1.0 + 0.2 * static_cast<double>(t))) < 1e-12);

    // Cubic samples on every 4th index: exact at knots, converges inside.
    const auto cubic = [](double x) { return 1e-6 * x * x * x - 2e-4 * x * x + 0.03 * x - 1.0; };
    std::vector<KnotPoint> knots;
    for (int x = 0; x < 400; x += 4) knots.push_back({static_cast<double>(x), cubic(x)});
    const auto fitted = spline_envelope(knots, 400, 0);
    for (const auto& k : knots) CHECK(std::abs(fitted[static_cast<std::size_t>(k.position)] - k.value) < 1e-9);
    for (std::size_t t = 100; t < 300; ++t) CHECK(std::abs(fitted[t] - cubic(static_cast<double>(t))) < 1e-10);

    const std::vector<KnotPoint> single = {{5.0, 1.0}};
    CHECK_THROWS_AS(spline_envelope(single, 10, 0), precondition_error);
    CHECK_NOTHROW(spline_envelope(single, 10, 2));  // mirrored about both ends
    CHECK_THROWS_AS(spline_envelope(std::span<const KnotPoint>{}, 10, 2), precondition_error);
}

TEST_CASE("pure tone is one dominant mode") {
    const auto x = tone(4096, 64.0);
    const auto set = emd_decompose(x);
    REQUIRE(!set.modes.empty());
    const double total = energy(x);
    double best = 0.0;
    for (const auto& m : set.modes) best = std::max(best, energy(m));
    CHECK(best / total > 0.95);
    CHECK(max_reconstruction_error(x, set) <= 1e-6);
}

TEST_CASE("two tones separate into the first two modes") {
    auto x = tone(8192, 16.0);
    const auto slow = tone(8192, 256.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += slow[i];
    const auto set = emd_decompose(x);
    REQUIRE(set.modes.size() >= 2);
    CHECK(zero_crossing_period(set.modes[0]) == doctest::Approx(16.0).epsilon(0.2));
    CHECK(zero_crossing_period(set.modes[1]) == doctest::Approx(256.0).epsilon(0.2));
}

TEST_CASE("decomposition invariants on a Mertens prefix") {
    const auto m = mertens_from_mobius(mobius_sieve(20'000));
    const std::vector<double> x(m.values().begin(), m.values().end());
    const auto set = emd_decompose(x);

    double peak = 0.0;
    for (const double v : x) peak = std::max(peak, std::abs(v));
    CHECK(max_reconstruction_error(x, set) <= 1e-6 * peak);
    for (std::size_t k = 0; k < set.modes.size(); ++k) {
        CHECK_MESSAGE(satisfies_imf_property(set.modes[k]), "mode " << k + 1);
        CHECK(set.modes[k].size() == x.size());
        CHECK(set.sift_counts[k] >= 1);
        CHECK(set.sift_counts[k] <= set.config_used.max_sifts);
    }
    CHECK(count_significant_extrema(set.residual, kTrendTolerance * peak) < 2);
    const auto soft_cap = static_cast<std::size_t>(std::ceil(std::log2(x.size()))) + 4;
    if (set.modes.size() > soft_cap) MESSAGE("mode count " << set.modes.size() << " above soft cap " << soft_cap);

    const auto again = emd_decompose(x);
    CHECK(again.modes == set.modes);
    CHECK(again.residual == set.residual);
}

TEST_CASE("emd preconditions") {
    std::vector<double> shortseq(15, 1.0);
    CHECK_THROWS_AS(emd_decompose(shortseq), precondition_error);
    auto bad = tone(64, 8.0);
    bad[10] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(emd_decompose(bad), precondition_error);
    CHECK_THROWS_AS(emd_decompose(tone(64, 8.0), {.sd_threshold = 0.0}), precondition_error);

    // A monotone ramp has nothing to sift: everything lands in the residual.
    std::vector<double> ramp(64);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    const auto set = emd_decompose(ramp);
    CHECK(set.modes.empty());
    CHECK(set.residual == ramp);
}
