#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace compchall {

using Bytes = std::vector<std::uint8_t>;

/// UTF-8 bytes of a string (identifiers and passwords are opaque byte strings
/// everywhere below this point).
Bytes utf8_bytes(std::string_view s);

std::string to_hex(std::span<const std::uint8_t> data);

/// Parses lowercase or uppercase hex. Throws std::invalid_argument on odd
/// length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// Constant-time byte-string equality. Always scans the longer input so
/// comparison time leaks only lengths, never content.
bool ct_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// 4-byte big-endian encoding.
void put_u32_be(Bytes& out, std::uint32_t v);

/// 8-byte big-endian encoding.
void put_u64_be(Bytes& out, std::uint64_t v);

Bytes u64_be(std::uint64_t v);

}  // namespace compchall
