#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mertens {

/// Möbius values mu(1..N), stored 0-based (element 0 holds mu(1)).
class MobiusTable {
public:
    MobiusTable() = default;

    /// Takes ownership of `values`. Every value must be -1, 0 or +1 and the
    /// first must be +1; throws precondition_error otherwise.
    explicit MobiusTable(std::vector<std::int8_t> values);

    std::uint64_t limit() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    /// mu(k) for 1 <= k <= limit(), unchecked.
    std::int8_t operator[](std::uint64_t k) const noexcept { return values_[k - 1]; }
    /// mu(k), throws precondition_error when k is out of range.
    std::int8_t at(std::uint64_t k) const;

    std::span<const std::int8_t> values() const noexcept { return values_; }

    friend bool operator==(const MobiusTable&, const MobiusTable&) = default;

private:
    std::vector<std::int8_t> values_;
};

/// Mertens values M(1..N), stored 0-based (element 0 holds M(1)).
class MertensTable {
public:
    MertensTable() = default;

    /// Checks M(1) == 1 and the unit-step property; throws precondition_error.
    explicit MertensTable(std::vector<std::int64_t> values);

    std::uint64_t limit() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::int64_t operator[](std::uint64_t n) const noexcept { return values_[n - 1]; }
    std::int64_t at(std::uint64_t n) const;

    std::span<const std::int64_t> values() const noexcept { return values_; }

    friend bool operator==(const MertensTable&, const MertensTable&) = default;

private:
    std::vector<std::int64_t> values_;
};

struct ParityCounts {
    std::uint64_t n = 0;
    std::uint64_t even_count = 0;  // k <= n with mu(k) = +1
    std::uint64_t odd_count = 0;   // k <= n with mu(k) = -1
    std::uint64_t squarefree = 0;  // sum of |mu(k)| for k <= n

    std::int64_t mertens() const noexcept {
        return static_cast<std::int64_t>(even_count) - static_cast<std::int64_t>(odd_count);
    }
    friend bool operator==(const ParityCounts&, const ParityCounts&) = default;
};

/// Linear (smallest-prime-factor) sieve for mu(1..limit). O(limit) time,
/// 5 bytes per entry at peak. Throws resource_error if allocation fails.
MobiusTable mobius_sieve(std::uint64_t limit);

/// How mobius_recursive enumerates the proper divisors of k.
enum class DivisorScan {
    literal,         // m = 1..k-1 with a divisibility test
    trial_division,  // divisor pairs (d, k/d) for d <= sqrt(k)
};

/// mu(k) = -sum_{m | k, m < k} mu(m), evaluated from `prior` = mu(1..k-1)
/// (or longer). Requires k >= 2.
int mobius_recursive(std::uint64_t k, std::span<const std::int8_t> prior,
                     DivisorScan scan = DivisorScan::literal);

/// Builds mu(1..limit) purely from the divisor-sum recursion.
MobiusTable mobius_recursive_table(std::uint64_t limit, DivisorScan scan = DivisorScan::literal);

struct DirectOptions {
    std::uint64_t max_n = 100'000;
    bool override_cap = false;
    DivisorScan scan = DivisorScan::literal;
};

/// M(n) = 1 + sum_{k=2..n} [-sum_{m | k, m < k} mu(m)]. Quadratic in n with
/// the literal scan; refuses n > options.max_n unless override_cap is set.
std::int64_t mertens_direct(std::uint64_t n, const DirectOptions& options = {});

/// Exact running prefix sum of mu.
MertensTable mertens_from_mobius(const MobiusTable& mobius);

/// Counts of mu = +1, mu = -1 and squarefree k over 1..n.
ParityCounts parity_counts(const MobiusTable& mobius, std::uint64_t n);

/// Streaming evaluation of M(n) = M(n-1) - sum_{m | n, m < n} mu(m).
///
/// The state always holds mu(1..n) and M(1..n) for the current index n; a
/// fresh state starts at n = 1. Checkpoints store both tables and are
/// validated on load (checksum, mu alphabet, M step consistency).
class MertensIncremental {
public:
    explicit MertensIncremental(DivisorScan scan = DivisorScan::trial_division);

    std::uint64_t index() const noexcept { return mobius_.size(); }
    std::int64_t value() const noexcept { return mertens_.back(); }

    /// Appends mu(n+1) and M(n+1).
    void step();
    /// Steps until index() == n; no-op when already past n.
    void advance_to(std::uint64_t n);

    MobiusTable mobius_table() const { return MobiusTable(mobius_); }
    MertensTable mertens_table() const { return MertensTable(mertens_); }

    void save_checkpoint(const std::filesystem::path& path) const;
    static MertensIncremental load_checkpoint(const std::filesystem::path& path,
                                              DivisorScan scan = DivisorScan::trial_division);

private:
    DivisorScan scan_;
    std::vector<std::int8_t> mobius_;
    std::vector<std::int64_t> mertens_;
};

}  // namespace mertens
