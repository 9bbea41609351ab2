#include <doctest.h>

#include <algorithm>
#include <chrono>

#include "mertens/core_tables.hpp"
#include "mertens/crosscheck.hpp"
#include "mertens/errors.hpp"
#include "oracles.hpp"

using namespace mertens;
using namespace mertens::crosscheck;

namespace {

// Brute-force tuple enumeration for D_k(n).
std::uint64_t enumerate_tuples(std::uint64_t n, unsigned k) {
    if (k == 0) return 1;
    std::uint64_t total = 0;
    for (std::uint64_t a = 2; a <= n; ++a) total += enumerate_tuples(n / a, k - 1);
    return total;
}

std::vector<std::uint64_t> totient_sieve(std::uint64_t limit) {
    std::vector<std::uint64_t> phi(limit + 1);
    for (std::uint64_t i = 0; i <= limit; ++i) phi[i] = i;
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (phi[p] != p) continue;
        for (std::uint64_t j = p; j <= limit; j += p) phi[j] -= phi[j] / p;
    }
    return phi;
}

}  // namespace

TEST_CASE("Redheffer matrix structure") {
    for (std::uint64_t n = 1; n <= 40; ++n) {
        const RedhefferMatrix r(n);
        std::uint64_t expected_ones = n + (n - 1);
        for (std::uint64_t i = 2; i <= n; ++i) expected_ones += n / i;
        CHECK(r.ones() == expected_ones);
        for (std::uint64_t i = 1; i <= n; ++i) {
            CHECK(r.entry(i, 1) == 1);
            CHECK(r.entry(i, i) == 1);
            for (std::uint64_t j = 2; j <= n; ++j) CHECK(r.entry(i, j) == (j % i == 0 ? 1 : 0));
        }
    }
}

TEST_CASE("Redheffer determinant") {
    CHECK(mertens_redheffer(1) == 1);
    CHECK(mertens_redheffer(2) == 0);
    CHECK(mertens_redheffer(10) == -1);
    CHECK_THROWS_AS(mertens_redheffer(0), precondition_error);
    CHECK_THROWS_AS(mertens_redheffer(201), precondition_error);

    const auto m = mertens_from_mobius(mobius_sieve(200));
    for (std::uint64_t n = 1; n <= 60; ++n) REQUIRE_MESSAGE(mertens_redheffer(n) == m[n], "n=" << n);
    CHECK(mertens_redheffer(200) == m[200]);
}

TEST_CASE("Farey sequence") {
    const auto f1 = farey_sequence(1);
    REQUIRE(f1.size() == 1);
    CHECK(f1[0] == Fraction{1, 1});
    const auto f5 = farey_sequence(5);
    const std::vector<Fraction> expected = {{1, 5}, {1, 4}, {1, 3}, {2, 5}, {1, 2},
                                            {3, 5}, {2, 3}, {3, 4}, {4, 5}, {1, 1}};
    CHECK(f5 == expected);

    const auto phi = totient_sieve(300);
    std::uint64_t summatory = 0;
    for (std::uint64_t n = 1; n <= 300; ++n) {
        summatory += phi[n];
        const auto seq = farey_sequence(n);
        REQUIRE(seq.size() == summatory);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            REQUIRE(oracle::gcd(seq[i].num, seq[i].den) == 1);
            REQUIRE(seq[i].num <= seq[i].den);
            if (i) REQUIRE(seq[i - 1].num * seq[i].den < seq[i].num * seq[i - 1].den);
        }
    }
}

TEST_CASE("Farey exponential sum") {
    CHECK(mertens_farey(1) == 1);
    CHECK(mertens_farey(2) == 0);
    CHECK(mertens_farey(30) == -3);
    CHECK_THROWS_AS(mertens_farey(1001), precondition_error);

    const auto m = mertens_from_mobius(mobius_sieve(1000));
    for (std::uint64_t n = 1; n <= 300; ++n) REQUIRE_MESSAGE(mertens_farey(n) == m[n], "n=" << n);
    CHECK(mertens_farey(1000) == 2);
}

TEST_CASE("hyperboloid counts match tuple enumeration") {
    for (std::uint64_t n = 1; n <= 200; ++n) {
        for (unsigned k = 0; k <= 8; ++k) REQUIRE(hyperboloid_count(n, k) == enumerate_tuples(n, k));
    }
    CHECK(hyperboloid_count(3, 1) == 2);
    CHECK(hyperboloid_count(1, 0) == 1);
}

TEST_CASE("hyperboloid alternating sum") {
    CHECK(mertens_hyperbolic(1) == 1);
    CHECK(mertens_hyperbolic(3) == -1);
    CHECK(mertens_hyperbolic(1000) == 2);
    CHECK_THROWS_AS(mertens_hyperbolic(100'001), precondition_error);

    const auto m = mertens_from_mobius(mobius_sieve(100'000));
    for (std::uint64_t n = 1; n <= 2000; ++n) REQUIRE_MESSAGE(mertens_hyperbolic(n) == m[n], "n=" << n);
    CHECK(mertens_hyperbolic(100'000) == -48);
}
