#include "mertens/crosscheck.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>

#include "mertens/errors.hpp"

namespace mertens::crosscheck {

namespace {

void require_range(const char* what, std::uint64_t n, std::uint64_t cap) {
    if (n < 1 || n > cap) {
        throw precondition_error(std::string(what) + ": n=" + std::to_string(n) + " outside 1.." +
                                 std::to_string(cap));
    }
}

// Memoised D_k(m) over the values floor(n / x) reached from one top-level n.
class HyperboloidCounter {
public:
    std::uint64_t count(std::uint64_t m, unsigned k) {
        if (k == 0) return 1;
        if ((m >> (k - 1)) < 2) return 0;  // 2^k > m
        if (memo_.size() < k) memo_.resize(k);
        auto& level = memo_[k - 1];
        if (const auto it = level.find(m); it != level.end()) return it->second;
        const std::uint64_t upper = m >> (k - 1);
        std::uint64_t total = 0;
        for (std::uint64_t a = 2; a <= upper; ++a) total += count(m / a, k - 1);
        level.emplace(m, total);
        return total;
    }

private:
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> memo_;
};

}  // namespace

RedhefferMatrix::RedhefferMatrix(std::uint64_t order) : order_(order), entries_(order * order, 0) {
    if (order < 1) throw precondition_error("RedhefferMatrix: order must be >= 1");
    for (std::uint64_t i = 1; i <= order; ++i) {
        entries_[(i - 1) * order_] = 1;
        for (std::uint64_t j = i; j <= order; j += i) entries_[(i - 1) * order_ + (j - 1)] = 1;
    }
}

std::uint64_t RedhefferMatrix::ones() const noexcept {
    std::uint64_t total = 0;
    for (const auto e : entries_) total += e;
    return total;
}

std::vector<Fraction> farey_sequence(std::uint64_t order) {
    if (order < 1) throw precondition_error("farey_sequence: order must be >= 1");
    std::vector<Fraction> out;
    // Neighbour recurrence starting from 0/1, 1/order.
    std::uint64_t a = 0, b = 1, c = 1, d = order;
    out.push_back({c, d});
    while (!(c == 1 && d == 1)) {
        const std::uint64_t k = (order + b) / d;
        const std::uint64_t e = k * c - a;
        const std::uint64_t f = k * d - b;
        a = c;
        b = d;
        c = e;
        d = f;
        out.push_back({c, d});
    }
    return out;
}

std::int64_t mertens_redheffer(std::uint64_t n) {
    require_range("mertens_redheffer", n, kRedhefferMax);
    using boost::multiprecision::cpp_int;

    const RedhefferMatrix r(n);
    std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) a[i][j] = r.entry(i + 1, j + 1);
    }

    int sign = 1;
    cpp_int previous = 1;
    for (std::uint64_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::uint64_t pivot = k + 1;
            while (pivot < n && a[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (std::uint64_t i = k + 1; i < n; ++i) {
            for (std::uint64_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
            }
            a[i][k] = 0;
        }
        previous = a[k][k];
    }
    const cpp_int det = sign * a[n - 1][n - 1];
    return det.convert_to<std::int64_t>();
}

std::int64_t mertens_farey(std::uint64_t n) {
    require_range("mertens_farey", n, kFareyMax);
    const auto fractions = farey_sequence(n);
    double re = 0.0;
    double im = 0.0;
    for (const auto& f : fractions) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(f.num) / static_cast<double>(f.den);
        re += std::cos(angle);
        im += std::sin(angle);
    }
    const double size = static_cast<double>(fractions.size());
    if (std::abs(im) >= 1e-6 * size) {
        throw numerical_error("mertens_farey: imaginary part " + std::to_string(im) + " at n=" +
                              std::to_string(n));
    }
    const double rounded = std::round(re);
    if (std::abs(re - rounded) > 0.25) {
        throw numerical_error("mertens_farey: rounding residue " + std::to_string(re - rounded) +
                              " at n=" + std::to_string(n));
    }
    return static_cast<std::int64_t>(rounded);
}

std::uint64_t hyperboloid_count(std::uint64_t n, unsigned k) {
    HyperboloidCounter counter;
    return counter.count(n, k);
}

std::int64_t mertens_hyperbolic(std::uint64_t n) {
    require_range("mertens_hyperbolic", n, kHyperbolicMax);
    HyperboloidCounter counter;
    std::int64_t total = 0;
    for (unsigned k = 0; k < 64 && (std::uint64_t{1} << k) <= n; ++k) {
        const auto d = static_cast<std::int64_t>(counter.count(n, k));
        total += (k % 2 == 0) ? d : -d;
    }
    return total;
}

}  // namespace mertens::crosscheck
