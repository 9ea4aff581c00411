#pragma once

/// Protocol state machines: challenge generation, client puzzle solving,
/// response construction, and stateless server verification.
///
/// Three variants share the message flow:
///   Base            — challenge H(r, R); server stores the password.
///   Lamport         — challenge H(r, R); server stores a hash-chain head
///                     H^i(P) and walks it backward one step per login.
///   OfflineResistant — challenge H(r, P, R), so an eavesdropped transcript
///                     forces a full 2^k scan per password guess.
///
/// The server keeps no per-challenge state. Message 2 carries a MAC over
/// everything the server will later need (proof value, user id, its own
/// secret key, and the per-user failure counter n); message 3 echoes it
/// back, and verification recomputes the MAC from stored per-user state
/// alone. Any failure increments n, which silently invalidates every
/// outstanding challenge for that user.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "compchall/bytes.hpp"
#include "compchall/entropy.hpp"
#include "compchall/hashcodec.hpp"

namespace compchall {

inline constexpr std::size_t kSaltLen = 16;
inline constexpr std::size_t kServerKeyLen = 32;
inline constexpr std::uint32_t kDefaultKBits = 20;
inline constexpr std::uint64_t kDefaultChainLength = 1000;

enum class Variant { Base, Lamport, OfflineResistant };

std::string_view variant_name(Variant v);                   // "base" | "lamport" | "offline"
std::optional<Variant> variant_from_name(std::string_view); // inverse, nullopt on junk

/// Puzzle difficulty. k is the bit width of the nonce r; the salt R is a
/// fixed 128 bits. Server policy keeps k in 1..=32; the protocol functions
/// additionally accept k = 0 (single-candidate puzzle), which the attack
/// simulator uses as its no-puzzle control.
struct PuzzleParams {
    std::uint32_t k_bits = kDefaultKBits;

    /// Validates the server-policy range 1..=32.
    void validate_policy() const;
};

/// The server's secret key, known only to it. Never appears in any wire
/// message or store file.
struct ServerKey {
    std::array<std::uint8_t, kServerKeyLen> bytes{};

    static ServerKey from_hex_string(std::string_view hex);
    Bytes to_bytes() const { return Bytes(bytes.begin(), bytes.end()); }
};

/// Message 2: puzzle digest, the salt R in the clear, the server's MAC,
/// and the difficulty k.
struct Challenge {
    Digest puzzle_digest;
    std::array<std::uint8_t, kSaltLen> salt{};
    Digest mac;
    std::uint32_t k_bits = kDefaultKBits;
};

/// Lamport proof: the solved nonce in the clear plus the previous chain
/// value H^(i-1)(P). prev_chain is raw seed bytes when i - 1 = 0.
struct LamportProof {
    std::uint32_t r = 0;
    Bytes prev_chain;
};

/// Message 3. The proof is H(r, P) for Base/OfflineResistant and
/// (r, H^(i-1)(P)) for Lamport; the MAC is echoed from message 2
/// unmodified.
struct ResponsePayload {
    std::string user_id;
    Variant variant = Variant::Base;
    std::variant<Digest, LamportProof> proof;
    Digest mac;
};

/// What verification decided and what it implies for stored state.
/// A failure always increments n; a Base/OfflineResistant success changes
/// nothing (this enables the computation-reuse feature); a Lamport success
/// advances the stored chain head.
struct ChainAdvance {
    Bytes new_head;
    std::uint64_t new_index = 0;
};

struct VerifyOutcome {
    bool success = false;
    std::optional<ChainAdvance> advance;  // set only on Lamport success
};

/// Per-user secret material. Base/OfflineResistant store the password
/// itself (the MAC computation needs H(r, P) server-side); Lamport stores
/// only the chain head H^i(P) and the index i.
struct PasswordSecret {
    Bytes password;
};

struct ChainSecret {
    Bytes head;
    std::uint64_t index = 0;
};

using SecretMaterial = std::variant<PasswordSecret, ChainSecret>;

/// The per-user state verification reads and apply_outcome mutates:
/// everything the stateless server is allowed to remember.
struct AccountState {
    Variant variant = Variant::Base;
    SecretMaterial secret = PasswordSecret{};
    std::uint64_t fail_count = 0;
};

/// H(r, P) — the proof digest shared by challenge MACs and responses.
Digest proof_hash(std::uint32_t r, std::span<const std::uint8_t> password, const HashConfig& cfg);

/// MAC over a client-supplied proof digest: H(h_rp, user, K, n).
Digest mac_over_proof(const Digest& h_rp, std::string_view user_id, const ServerKey& key,
                      std::uint64_t fail_count, const HashConfig& cfg);

/// Lamport MAC: H(r, H^i(P), user, K, n).
Digest lamport_mac(std::uint32_t r, std::span<const std::uint8_t> chain_head,
                   std::string_view user_id, const ServerKey& key, std::uint64_t fail_count,
                   const HashConfig& cfg);

/// MAC as issued with a fresh challenge, dispatching on variant.
Digest compute_mac(Variant variant, std::uint32_t r, const SecretMaterial& secret,
                   std::string_view user_id, const ServerKey& key, std::uint64_t fail_count,
                   const HashConfig& cfg);

/// Issues a fresh challenge: draws r uniformly from [0, 2^k) and a 16-byte
/// salt, builds the puzzle digest for the variant, and MACs everything the
/// server will later need. The caller must not retain r or the salt — the
/// returned message is self-contained and that is the statelessness
/// contract.
Challenge gen_challenge(const AccountState& account, std::string_view user_id,
                        const PuzzleParams& params, const ServerKey& key,
                        EntropySource& entropy, const HashConfig& cfg);

/// Puzzle solver result: the found nonce (nullopt if no candidate in
/// [0, 2^k) matched) and how many hash evaluations the scan cost.
struct SolveResult {
    std::optional<std::uint32_t> r;
    std::uint64_t evaluations = 0;
};

/// Brute-force scan for r, ascending from 0, returning the first (hence
/// smallest) match. `password` must be supplied exactly for the
/// OfflineResistant variant, whose puzzle binds P; a wrong password there
/// comes back as NotFound after a full 2^k scan.
SolveResult solve_puzzle(const Digest& puzzle_digest,
                         std::span<const std::uint8_t, kSaltLen> salt, std::uint32_t k_bits,
                         Variant variant, std::optional<std::string_view> password,
                         const HashConfig& cfg);

/// Builds message 3 for Base/OfflineResistant: proof = H(r, P), MAC echoed
/// verbatim.
ResponsePayload make_response(Variant variant, std::string_view user_id, std::uint32_t r,
                              std::string_view password, const Digest& mac,
                              const HashConfig& cfg);

/// Builds message 3 for Lamport: the client derives H^(i-1)(P) from its
/// own password and its knowledge of the current index i.
ResponsePayload make_lamport_response(std::string_view user_id, std::uint32_t r,
                                      std::string_view password, std::uint64_t chain_index,
                                      const Digest& mac, const HashConfig& cfg);

/// Stateless verification: a pure function of (stored account state,
/// response, server key). Base/OfflineResistant recompute the MAC over the
/// supplied proof and the *stored* n; Lamport additionally checks that one
/// chain step over the supplied H^(i-1)(P) reproduces the stored head.
/// All digest comparisons are constant-time.
///
/// Throws ChainExhaustedError when a Lamport record is already at index 0.
/// `user_id` is the identity the record is stored under; the caller must
/// have looked the record up by resp.user_id.
VerifyOutcome verify_response(const AccountState& account, std::string_view user_id,
                              const ResponsePayload& resp, const ServerKey& key,
                              const HashConfig& cfg);

/// Applies a verification outcome: failure increments n, a Lamport success
/// replaces the chain head and decrements the index, any other success
/// leaves the record untouched.
void apply_outcome(AccountState& account, const VerifyOutcome& outcome);

/// Deterministic decoy account for unknown user ids, derived from the
/// server key, so message 2 does not turn into a user-enumeration oracle.
AccountState make_phantom_account(std::string_view user_id, Variant variant,
                                  const ServerKey& key, const HashConfig& cfg);

}  // namespace compchall
