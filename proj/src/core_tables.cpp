#include "mertens/core_tables.hpp"

#include <algorithm>
#include <limits>
#include <new>
#include <string>

#include "mertens/errors.hpp"
#include "mertens/table_io.hpp"

namespace mertens {

namespace {

constexpr char kCheckpointMagic[4] = {'M', 'C', 'K', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename Index>
int divisor_sum_literal(Index k, std::span<const std::int8_t> prior) {
    int sum = 0;
    for (Index m = 1; m < k; ++m) {
        if (k % m == 0) sum += prior[m - 1];
    }
    return sum;
}

int divisor_sum_trial(std::uint64_t k, std::span<const std::int8_t> prior) {
    int sum = 0;
    for (std::uint64_t d = 1; d * d <= k; ++d) {
        if (k % d != 0) continue;
        const std::uint64_t e = k / d;
        if (d < k) sum += prior[d - 1];
        if (e != d && e < k) sum += prior[e - 1];
    }
    return sum;
}

}  // namespace

MobiusTable::MobiusTable(std::vector<std::int8_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw precondition_error("MobiusTable: empty table");
    if (values_.front() != 1) throw precondition_error("MobiusTable: mu(1) must be 1");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto v = values_[i];
        if (v < -1 || v > 1) {
            throw precondition_error("MobiusTable: value out of {-1,0,1} at k=" + std::to_string(i + 1));
        }
    }
}

std::int8_t MobiusTable::at(std::uint64_t k) const {
    if (k < 1 || k > limit()) {
        throw precondition_error("MobiusTable: index " + std::to_string(k) + " outside 1.." +
                                 std::to_string(limit()));
    }
    return (*this)[k];
}

MertensTable::MertensTable(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw precondition_error("MertensTable: empty table");
    if (values_.front() != 1) throw precondition_error("MertensTable: M(1) must be 1");
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const auto step = values_[i] - values_[i - 1];
        if (step < -1 || step > 1) {
            throw precondition_error("MertensTable: step larger than 1 at n=" + std::to_string(i + 1));
        }
    }
}

std::int64_t MertensTable::at(std::uint64_t n) const {
    if (n < 1 || n > limit()) {
        throw precondition_error("MertensTable: index " + std::to_string(n) + " outside 1.." +
                                 std::to_string(limit()));
    }
    return (*this)[n];
}

MobiusTable mobius_sieve(std::uint64_t limit) {
    if (limit < 1) throw precondition_error("mobius_sieve: limit must be >= 1");
    if (limit >= std::numeric_limits<std::uint32_t>::max()) {
        throw precondition_error("mobius_sieve: limit must fit the 32-bit factor array");
    }

    std::vector<std::int8_t> mu;
    std::vector<std::uint32_t> smallest_factor;
    std::vector<std::uint32_t> primes;
    try {
        mu.assign(limit, 0);
        smallest_factor.assign(limit + 1, 0);
    } catch (const std::bad_alloc&) {
        throw resource_error("mobius_sieve: cannot allocate " + std::to_string(limit * 5) +
                             " bytes for limit " + std::to_string(limit));
    }

    mu[0] = 1;
    const auto n = static_cast<std::uint32_t>(limit);
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (smallest_factor[i] == 0) {
            smallest_factor[i] = i;
            primes.push_back(i);
            mu[i - 1] = -1;
        }
        const std::uint32_t lp = smallest_factor[i];
        const std::uint64_t bound = n / i;
        for (const std::uint32_t p : primes) {
            if (p > lp || p > bound) break;
            const std::uint32_t composite = i * p;
            smallest_factor[composite] = p;
            mu[composite - 1] = (p == lp) ? std::int8_t{0} : static_cast<std::int8_t>(-mu[i - 1]);
        }
    }
    return MobiusTable(std::move(mu));
}

int mobius_recursive(std::uint64_t k, std::span<const std::int8_t> prior, DivisorScan scan) {
    if (k < 2) throw precondition_error("mobius_recursive: k must be >= 2");
    if (prior.size() < k - 1) {
        throw precondition_error("mobius_recursive: prior covers " + std::to_string(prior.size()) +
                                 " values, need " + std::to_string(k - 1));
    }
    int sum = 0;
    if (scan == DivisorScan::trial_division) sum = divisor_sum_trial(k, prior);
    else if (k <= std::numeric_limits<std::uint32_t>::max()) sum = divisor_sum_literal(static_cast<std::uint32_t>(k), prior);
    else sum = divisor_sum_literal(k, prior);
    return -sum;
}

MobiusTable mobius_recursive_table(std::uint64_t limit, DivisorScan scan) {
    if (limit < 1) throw precondition_error("mobius_recursive_table: limit must be >= 1");
    std::vector<std::int8_t> mu;
    mu.reserve(limit);
    mu.push_back(1);
    for (std::uint64_t k = 2; k <= limit; ++k) {
        mu.push_back(static_cast<std::int8_t>(mobius_recursive(k, mu, scan)));
    }
    return MobiusTable(std::move(mu));
}

std::int64_t mertens_direct(std::uint64_t n, const DirectOptions& options) {
    if (n < 1) throw precondition_error("mertens_direct: n must be >= 1");
    if (n > options.max_n && !options.override_cap) {
        throw precondition_error("mertens_direct: n=" + std::to_string(n) + " exceeds cap " +
                                 std::to_string(options.max_n) + " (set override to force)");
    }
    std::vector<std::int8_t> mu;
    mu.reserve(n);
    mu.push_back(1);
    std::int64_t total = 1;
    for (std::uint64_t k = 2; k <= n; ++k) {
        const int term = mobius_recursive(k, mu, options.scan);
        mu.push_back(static_cast<std::int8_t>(term));
        total += term;
    }
    return total;
}

MertensTable mertens_from_mobius(const MobiusTable& mobius) {
    std::vector<std::int64_t> m;
    try {
        m.resize(mobius.limit());
    } catch (const std::bad_alloc&) {
        throw resource_error("mertens_from_mobius: cannot allocate " +
                             std::to_string(mobius.limit() * 8) + " bytes");
    }
    std::int64_t running = 0;
    const auto mu = mobius.values();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        running += mu[i];
        m[i] = running;
    }
    return MertensTable(std::move(m));
}

ParityCounts parity_counts(const MobiusTable& mobius, std::uint64_t n) {
    if (n < 1 || n > mobius.limit()) {
        throw precondition_error("parity_counts: n=" + std::to_string(n) + " outside 1.." +
                                 std::to_string(mobius.limit()));
    }
    ParityCounts counts;
    counts.n = n;
    const auto mu = mobius.values().first(n);
    for (const auto v : mu) {
        if (v > 0) ++counts.even_count;
        else if (v < 0) ++counts.odd_count;
    }
    counts.squarefree = counts.even_count + counts.odd_count;
    return counts;
}

MertensIncremental::MertensIncremental(DivisorScan scan) : scan_(scan), mobius_{1}, mertens_{1} {}

void MertensIncremental::step() {
    const std::uint64_t n = index() + 1;
    const int mu_n = mobius_recursive(n, mobius_, scan_);
    mobius_.push_back(static_cast<std::int8_t>(mu_n));
    mertens_.push_back(mertens_.back() + mu_n);
}

void MertensIncremental::advance_to(std::uint64_t n) {
    if (n > index()) {
        mobius_.reserve(n);
        mertens_.reserve(n);
    }
    while (index() < n) step();
}

void MertensIncremental::save_checkpoint(const std::filesystem::path& path) const {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(4 + 4 + 8 + mobius_.size() * 9 + 8);
    bytes.insert(bytes.end(), std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
    io::put_u32(bytes, kCheckpointVersion);
    io::put_u64(bytes, index());
    for (const auto v : mobius_) bytes.push_back(static_cast<std::uint8_t>(v));
    for (const auto v : mertens_) io::put_u64(bytes, static_cast<std::uint64_t>(v));
    io::put_u64(bytes, io::byte_checksum(bytes));
    io::write_file_atomic(path, bytes);
}

MertensIncremental MertensIncremental::load_checkpoint(const std::filesystem::path& path,
                                                       DivisorScan scan) {
    const auto bytes = io::read_file(path);
    const std::span<const std::uint8_t> view(bytes);
    const auto fail = [&](const std::string& what) {
        return integrity_error("checkpoint " + path.string() + ": " + what);
    };
    if (bytes.size() < 24 || !std::equal(std::begin(kCheckpointMagic), std::end(kCheckpointMagic),
                                         bytes.begin())) {
        throw fail("bad magic");
    }
    if (io::get_u32(view, 4) != kCheckpointVersion) throw fail("unsupported version");
    const std::uint64_t count = io::get_u64(view, 8);
    if (count < 1 || bytes.size() != 16 + count * 9 + 8) throw fail("size mismatch");
    const std::size_t body = bytes.size() - 8;
    if (io::byte_checksum(view.first(body)) != io::get_u64(view, body)) throw fail("checksum mismatch");

    MertensIncremental state(scan);
    state.mobius_.resize(count);
    state.mertens_.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        state.mobius_[i] = static_cast<std::int8_t>(bytes[16 + i]);
        state.mertens_[i] = static_cast<std::int64_t>(io::get_u64(view, 16 + count + 8 * i));
    }
    try {
        MobiusTable check_mu(state.mobius_);
        MertensTable check_m(state.mertens_);
    } catch (const precondition_error& e) {
        throw fail(e.what());
    }
    std::int64_t running = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        running += state.mobius_[i];
        if (running != state.mertens_[i]) throw fail("M inconsistent with mu at n=" + std::to_string(i + 1));
    }
    return state;
}

}  // namespace mertens
