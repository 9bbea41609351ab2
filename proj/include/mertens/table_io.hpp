#pragma once

// MTAB binary table files and CSV export.
//
// Layout (all integers little-endian):
//   "MTAB"            4 bytes
//   version           u32  (currently 1)
//   kind              u8   (0 = mu as i8, 1 = M as i64)
//   count             u64
//   values            count * (1 | 8) bytes, indices 1..count
//   checksum          u64  sum of every preceding byte, mod 2^64

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mertens/core_tables.hpp"

namespace mertens::io {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class PayloadKind : std::uint8_t { mobius = 0, mertens = 1 };

std::vector<std::uint8_t> encode(const MobiusTable& table);
std::vector<std::uint8_t> encode(const MertensTable& table);

/// Both throw integrity_error on bad magic, version, kind, size or checksum.
MobiusTable decode_mobius(std::span<const std::uint8_t> bytes);
MertensTable decode_mertens(std::span<const std::uint8_t> bytes);

std::uint64_t byte_checksum(std::span<const std::uint8_t> bytes) noexcept;

/// Reads a whole file; throws io_error naming the path.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes to `path.tmp` and renames over `path`, so a reader never sees a
/// partial file. Throws io_error naming the path.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

void write_table(const std::filesystem::path& path, const MobiusTable& table);
void write_table(const std::filesystem::path& path, const MertensTable& table);
MobiusTable read_mobius(const std::filesystem::path& path);
MertensTable read_mertens(const std::filesystem::path& path);

/// `n,value` header then one row per index.
void write_csv(std::ostream& out, const MobiusTable& table);
void write_csv(std::ostream& out, const MertensTable& table);

// Little-endian primitives shared with the checkpoint format.
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset);
std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t offset);

}  // namespace mertens::io
