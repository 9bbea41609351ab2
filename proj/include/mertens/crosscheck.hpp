#pragma once

// Small-n identities for M(n) that share no code with the sieve: the
// Redheffer determinant, the Farey exponential sum and the signed count of
// lattice points under hyperboloids.

#include <cstdint>
#include <vector>

namespace mertens::crosscheck {

inline constexpr std::uint64_t kRedhefferMax = 200;
inline constexpr std::uint64_t kFareyMax = 1000;
inline constexpr std::uint64_t kHyperbolicMax = 100'000;

/// Dense 0/1 Redheffer matrix: entry(i, j) = 1 iff j == 1 or i | j (1-based).
class RedhefferMatrix {
public:
    explicit RedhefferMatrix(std::uint64_t order);

    std::uint64_t order() const noexcept { return order_; }
    int entry(std::uint64_t i, std::uint64_t j) const noexcept {
        return entries_[(i - 1) * order_ + (j - 1)];
    }
    std::uint64_t ones() const noexcept;

private:
    std::uint64_t order_;
    std::vector<std::uint8_t> entries_;
};

struct Fraction {
    std::uint64_t num;
    std::uint64_t den;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Reduced fractions a/b with 1 <= a <= b <= order in increasing order, so
/// 0/1 is excluded and 1/1 included.
std::vector<Fraction> farey_sequence(std::uint64_t order);

/// det R(n) by fraction-free Bareiss elimination over exact integers.
/// Requires 1 <= n <= kRedhefferMax.
std::int64_t mertens_redheffer(std::uint64_t n);

/// Rounded real part of sum exp(2 pi i a) over the Farey fractions of order n.
/// Requires 1 <= n <= kFareyMax. Throws numerical_error if the imaginary part
/// exceeds 1e-6 * |F_n| or the rounding residue exceeds 0.25.
std::int64_t mertens_farey(std::uint64_t n);

/// Number of k-tuples (a_1..a_k), all a_i >= 2, with product <= n.
std::uint64_t hyperboloid_count(std::uint64_t n, unsigned k);

/// sum_k (-1)^k hyperboloid_count(n, k). Requires 1 <= n <= kHyperbolicMax.
std::int64_t mertens_hyperbolic(std::uint64_t n);

}  // namespace mertens::crosscheck
