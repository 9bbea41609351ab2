#include "mertens/table_io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>

#include "mertens/errors.hpp"

namespace mertens::io {

namespace {

constexpr char kMagic[4] = {'M', 'T', 'A', 'B'};
constexpr std::size_t kHeaderSize = 4 + 4 + 1 + 8;

std::vector<std::uint8_t> header(PayloadKind kind, std::uint64_t count, std::size_t value_size) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + count * value_size + 8);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, kFormatVersion);
    out.push_back(static_cast<std::uint8_t>(kind));
    put_u64(out, count);
    return out;
}

// Validates framing and returns the value count.
std::uint64_t check_frame(std::span<const std::uint8_t> bytes, PayloadKind kind, std::size_t value_size) {
    if (bytes.size() < kHeaderSize + 8 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw integrity_error("MTAB: bad magic");
    }
    const std::size_t body = bytes.size() - 8;
    if (byte_checksum(bytes.first(body)) != get_u64(bytes, body)) {
        throw integrity_error("MTAB: checksum mismatch");
    }
    if (get_u32(bytes, 4) != kFormatVersion) throw integrity_error("MTAB: unsupported version");
    if (bytes[8] != static_cast<std::uint8_t>(kind)) throw integrity_error("MTAB: unexpected payload kind");
    const std::uint64_t count = get_u64(bytes, 9);
    if (count == 0 || (body - kHeaderSize) / value_size != count || (body - kHeaderSize) % value_size != 0) {
        throw integrity_error("MTAB: payload size does not match count");
    }
    return count;
}

template <typename Table>
void write_csv_impl(std::ostream& out, const Table& table) {
    out << "n,value\n";
    std::uint64_t n = 1;
    for (const auto v : table.values()) {
        out << n++ << ',' << static_cast<std::int64_t>(v) << '\n';
    }
}

}  // namespace

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[offset + i];
    return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[offset + i];
    return v;
}

std::uint64_t byte_checksum(std::span<const std::uint8_t> bytes) noexcept {
    std::uint64_t sum = 0;
    for (const auto b : bytes) sum += b;
    return sum;
}

std::vector<std::uint8_t> encode(const MobiusTable& table) {
    auto out = header(PayloadKind::mobius, table.limit(), 1);
    for (const auto v : table.values()) out.push_back(static_cast<std::uint8_t>(v));
    put_u64(out, byte_checksum(out));
    return out;
}

std::vector<std::uint8_t> encode(const MertensTable& table) {
    auto out = header(PayloadKind::mertens, table.limit(), 8);
    for (const auto v : table.values()) put_u64(out, static_cast<std::uint64_t>(v));
    put_u64(out, byte_checksum(out));
    return out;
}

MobiusTable decode_mobius(std::span<const std::uint8_t> bytes) {
    const auto count = check_frame(bytes, PayloadKind::mobius, 1);
    std::vector<std::int8_t> values(count);
    for (std::uint64_t i = 0; i < count; ++i) values[i] = static_cast<std::int8_t>(bytes[kHeaderSize + i]);
    try {
        return MobiusTable(std::move(values));
    } catch (const precondition_error& e) {
        throw integrity_error(std::string("MTAB: ") + e.what());
    }
}

MertensTable decode_mertens(std::span<const std::uint8_t> bytes) {
    const auto count = check_frame(bytes, PayloadKind::mertens, 8);
    std::vector<std::int64_t> values(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        values[i] = static_cast<std::int64_t>(get_u64(bytes, kHeaderSize + 8 * i));
    }
    try {
        return MertensTable(std::move(values));
    } catch (const precondition_error& e) {
        throw integrity_error(std::string("MTAB: ") + e.what());
    }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw io_error("cannot open " + path.string());
    const auto size = static_cast<std::size_t>(in.tellg());
    std::vector<std::uint8_t> bytes(size);
    in.seekg(0);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw io_error("cannot read " + path.string());
    }
    return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_table(const std::filesystem::path& path, const MobiusTable& table) {
    write_file_atomic(path, encode(table));
}

void write_table(const std::filesystem::path& path, const MertensTable& table) {
    write_file_atomic(path, encode(table));
}

MobiusTable read_mobius(const std::filesystem::path& path) {
    try {
        return decode_mobius(read_file(path));
    } catch (const integrity_error& e) {
        throw integrity_error(path.string() + ": " + e.what());
    }
}

MertensTable read_mertens(const std::filesystem::path& path) {
    try {
        return decode_mertens(read_file(path));
    } catch (const integrity_error& e) {
        throw integrity_error(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const MobiusTable& table) { write_csv_impl(out, table); }
void write_csv(std::ostream& out, const MertensTable& table) { write_csv_impl(out, table); }

}  // namespace mertens::io
