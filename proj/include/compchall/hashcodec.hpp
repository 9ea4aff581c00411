#pragma once

/// Canonical byte encoding of multi-field hash inputs, digest computation,
/// and hash-chain evaluation. Every hash in the protocol goes through this
/// module, so client, server and simulator agree bit-exactly on what gets
/// hashed.
///
/// Layout of an encoded tuple: one context-tag byte, then for each field a
/// 4-byte big-endian length followed by the field bytes. The mapping
/// (tag, fields) -> bytes is injective, and the tag keeps the protocol's
/// distinct hash uses (challenge, MAC, proof, chain step) from ever sharing
/// an input.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include "compchall/bytes.hpp"

namespace compchall {

/// 1-byte domain-separation label, one per hash context.
enum class FieldTag : std::uint8_t {
    Chal = 0x01,   ///< puzzle digest sent in message 2
    Mac = 0x02,    ///< server's self-authenticating MAC
    Proof = 0x03,  ///< client's H(r, P) proof in message 3
    Chain = 0x04,  ///< one Lamport chain step
};

/// Named hash algorithm and its output size. The algorithm must be
/// collision resistant; SHA-256 is the default.
struct HashConfig {
    std::string algorithm = "sha256";
    std::size_t digest_len = 32;

    static HashConfig sha256() { return HashConfig{}; }

    /// Resolves an algorithm by name and fills in its digest length.
    /// Throws ConfigError for names the crypto backend does not know.
    static HashConfig for_algorithm(std::string_view name);
};

/// Fixed-length hash output. Equality is constant-time.
struct Digest {
    Bytes bytes;

    bool operator==(const Digest& other) const {
        return ct_equal(bytes, other.bytes);
    }
    bool operator!=(const Digest& other) const { return !(*this == other); }

    std::string hex() const { return to_hex(bytes); }
    static Digest from_hex_string(std::string_view hex) { return Digest{from_hex(hex)}; }
};

/// Canonical injective encoding: tag byte, then per field a 4-byte
/// big-endian length prefix and the raw field bytes.
/// Throws EncodingError when a field exceeds 2^32 - 1 bytes.
Bytes encode_fields(FieldTag tag, std::span<const Bytes> fields);
Bytes encode_fields(FieldTag tag, std::initializer_list<Bytes> fields);

/// Plain digest of `data` under the configured algorithm.
Digest digest(std::span<const std::uint8_t> data, const HashConfig& cfg);

/// digest(encode_fields(tag, fields)) — the only way protocol code hashes
/// anything.
Digest hash_tuple(FieldTag tag, std::span<const Bytes> fields, const HashConfig& cfg);
Digest hash_tuple(FieldTag tag, std::initializer_list<Bytes> fields, const HashConfig& cfg);

/// Fixed 4-byte big-endian encoding of the puzzle nonce r. The width never
/// depends on the difficulty k, so retuning the puzzle cannot change any
/// message layout. Throws std::domain_error when r >= 2^k or k > 32.
Bytes encode_r(std::uint32_t r, std::uint32_t k_bits);

/// m-fold hash chain: H^0(P) is the seed itself, H^i(P) =
/// hash_tuple(Chain, [H^(i-1)(P)]). Returns raw seed bytes for m = 0,
/// digest bytes otherwise.
Bytes hash_chain(std::span<const std::uint8_t> seed, std::uint64_t m, const HashConfig& cfg);

/// Incremental hasher over the canonical encoding; used by the puzzle
/// solver, which hashes millions of near-identical tuples and cannot
/// afford a context allocation per candidate.
class TupleHasher {
  public:
    explicit TupleHasher(const HashConfig& cfg);
    ~TupleHasher();
    TupleHasher(const TupleHasher&) = delete;
    TupleHasher& operator=(const TupleHasher&) = delete;

    /// Digest of a pre-encoded buffer (caller assembled it with
    /// encode_fields and may patch bytes in place between calls).
    Digest hash(std::span<const std::uint8_t> encoded);

  private:
    struct Impl;
    Impl* impl_;
};

}  // namespace compchall
