#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mertens/core_tables.hpp"
#include "mertens/errors.hpp"
#include "mertens/table_io.hpp"
#include "oracles.hpp"

using namespace mertens;

TEST_CASE("sieve small tables") {
    CHECK(mobius_sieve(1).values().size() == 1);
    CHECK(mobius_sieve(1)[1] == 1);

    const auto six = mobius_sieve(6);
    CHECK(six[4] == 0);
    CHECK(six[6] == 1);

    const auto ten = mobius_sieve(10);
    const std::vector<std::int8_t> expected = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    CHECK(std::vector<std::int8_t>(ten.values().begin(), ten.values().end()) == expected);

    CHECK_THROWS_AS(mobius_sieve(0), precondition_error);
}

TEST_CASE("sieve agrees with trial factorisation") {
    constexpr std::uint64_t limit = 100'000;
    const auto mu = mobius_sieve(limit);
    for (std::uint64_t k = 1; k <= limit; ++k) {
        REQUIRE_MESSAGE(mu[k] == oracle::mobius_by_factoring(k), "k=" << k);
    }
}

TEST_CASE("mobius_recursive examples") {
    const std::vector<std::int8_t> one = {1};
    CHECK(mobius_recursive(2, one) == -1);
    CHECK(mobius_recursive(2, one, DivisorScan::trial_division) == -1);

    const std::vector<std::int8_t> three = {1, -1, -1};
    CHECK(mobius_recursive(4, three) == 0);

    const auto sieve = mobius_sieve(12);
    CHECK(mobius_recursive(12, sieve.values().first(11)) == sieve[12]);
    CHECK(mobius_recursive(12, sieve.values().first(11)) == 0);

    CHECK_THROWS_AS(mobius_recursive(5, three), precondition_error);
    CHECK_THROWS_AS(mobius_recursive(1, one), precondition_error);
}

TEST_CASE("both divisor scans reproduce the sieve for k <= 1e5") {
    constexpr std::uint64_t limit = 100'000;
    const auto sieve = mobius_sieve(limit);
    const auto prior = sieve.values();
    for (std::uint64_t k = 2; k <= limit; ++k) {
        const int literal = mobius_recursive(k, prior, DivisorScan::literal);
        const int trial = mobius_recursive(k, prior, DivisorScan::trial_division);
        REQUIRE_MESSAGE(literal == sieve[k], "k=" << k);
        REQUIRE_MESSAGE(trial == sieve[k], "k=" << k);
    }
    // The recursion is self-sufficient: built from nothing but mu(1) = 1.
    CHECK(mobius_recursive_table(limit, DivisorScan::trial_division) == sieve);
}

TEST_CASE("mertens_direct") {
    CHECK(mertens_direct(1) == 1);
    CHECK(mertens_direct(10) == -1);
    CHECK(mertens_direct(100) == 1);
    CHECK(mertens_direct(1000, {.scan = DivisorScan::trial_division}) == 2);

    CHECK_THROWS_AS(mertens_direct(0), precondition_error);
    CHECK_THROWS_AS(mertens_direct(100'001), precondition_error);
    CHECK(mertens_direct(200, {.max_n = 100, .override_cap = true}) == -8);
}

TEST_CASE("mertens_direct matches the sieve prefix sums for n <= 5000") {
    constexpr std::uint64_t limit = 5000;
    const auto m = mertens_from_mobius(mobius_sieve(limit));
    // Partial sums of the recursive table are the direct Mertens values for every n.
    const auto recursive = mertens_from_mobius(mobius_recursive_table(limit, DivisorScan::literal));
    CHECK(recursive == m);
    for (const std::uint64_t n : {2u, 3u, 97u, 1000u, 4999u, 5000u}) CHECK(mertens_direct(n) == m[n]);
}

TEST_CASE("mertens_from_mobius") {
    CHECK(mertens_from_mobius(MobiusTable({1})).values()[0] == 1);
    CHECK(mertens_from_mobius(mobius_sieve(60))[60] == -1);

    const auto m = mertens_from_mobius(mobius_sieve(50'000));
    const auto ref = oracle::mertens_by_factoring(50'000);
    for (std::uint64_t n = 1; n <= 50'000; ++n) REQUIRE(m[n] == ref[n]);
    for (std::uint64_t n = 2; n <= 50'000; ++n) REQUIRE(std::abs(m[n] - m[n - 1]) <= 1);
}

TEST_CASE("table constructors enforce their invariants") {
    CHECK_THROWS_AS(MobiusTable(std::vector<std::int8_t>{}), precondition_error);
    CHECK_THROWS_AS(MobiusTable({-1}), precondition_error);
    CHECK_THROWS_AS(MobiusTable({1, 2}), precondition_error);
    CHECK_THROWS_AS(MertensTable({0}), precondition_error);
    CHECK_THROWS_AS(MertensTable({1, 3}), precondition_error);
    CHECK_THROWS_AS(mobius_sieve(5).at(6), precondition_error);
    CHECK_NOTHROW(MertensTable({1, 0, -1, -1}));
}

TEST_CASE("parity_counts") {
    const auto mu = mobius_sieve(10'000);
    CHECK(parity_counts(mu, 1) == ParityCounts{1, 1, 0, 1});
    CHECK(parity_counts(mu, 10) == ParityCounts{10, 3, 4, 7});
    CHECK(parity_counts(mu, 10).mertens() == -1);
    CHECK_THROWS_AS(parity_counts(mu, 10'001), precondition_error);
    CHECK_THROWS_AS(parity_counts(mu, 0), precondition_error);

    const auto m = mertens_from_mobius(mu);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> pick(1, 10'000);
    for (int i = 0; i < 200; ++i) {
        const auto n = pick(rng);
        const auto c = parity_counts(mu, n);
        REQUIRE(c.squarefree == c.even_count + c.odd_count);
        REQUIRE(c.mertens() == m[n]);
        REQUIRE(c.squarefree <= n);
    }
}

TEST_CASE("incremental recursion") {
    MertensIncremental inc;
    CHECK(inc.index() == 1);
    CHECK(inc.value() == 1);
    inc.step();
    CHECK(inc.value() == 0);
    inc.advance_to(20);
    CHECK(inc.value() == -3);
    inc.advance_to(10'000);
    CHECK(inc.value() == -23);
    CHECK(inc.mertens_table() == mertens_from_mobius(mobius_sieve(10'000)));

    MertensIncremental literal(DivisorScan::literal);
    literal.advance_to(2000);
    CHECK(literal.value() == 5);
}

TEST_CASE("incremental resume from checkpoint equals an uninterrupted run") {
    const auto dir = std::filesystem::temp_directory_path() / "mertens_core_ckpt";
    std::filesystem::create_directories(dir);
    const auto path = dir / "state.ckpt";

    MertensIncremental full;
    full.advance_to(3000);

    for (const std::uint64_t cut : {1u, 2u, 999u, 1000u, 2999u}) {
        MertensIncremental first;
        first.advance_to(cut);
        first.save_checkpoint(path);
        auto resumed = MertensIncremental::load_checkpoint(path);
        CHECK(resumed.index() == cut);
        resumed.advance_to(3000);
        CHECK(resumed.mobius_table() == full.mobius_table());
        CHECK(resumed.mertens_table() == full.mertens_table());
    }

    SUBCASE("corrupted checkpoint is rejected") {
        full.save_checkpoint(path);
        auto bytes = io::read_file(path);
        bytes[100] ^= 0x01;
        io::write_file_atomic(path, bytes);
        CHECK_THROWS_AS(MertensIncremental::load_checkpoint(path), integrity_error);
    }
    SUBCASE("truncated checkpoint is rejected") {
        full.save_checkpoint(path);
        auto bytes = io::read_file(path);
        bytes.resize(bytes.size() - 9);
        io::write_file_atomic(path, bytes);
        CHECK_THROWS_AS(MertensIncremental::load_checkpoint(path), integrity_error);
    }
    std::filesystem::remove_all(dir);
}
