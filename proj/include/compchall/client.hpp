#pragma once

/// Reference client: performs the two-connection login flow and keeps the
/// computation-reuse cache. While no failure lands on the account, the
/// server's counter n is unchanged and the previously issued MAC is still
/// valid — so the client remembers the solved nonce r and that MAC, and
/// re-derives H(r, P) from the typed password on the next login instead
/// of grinding the puzzle again. One cheap hash replaces a 2^k scan.
///
/// The cache never applies to the Lamport variant: a successful login
/// advances the stored chain head, so reuse is impossible by
/// construction. For Lamport the client instead tracks the chain index it
/// must respond with next.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "compchall/protocol.hpp"

namespace compchall {

class ClientCache {
  public:
    struct Entry {
        std::uint32_t r = 0;
        std::string mac_hex;
        /// Hash of the password the entry succeeded with, so the client
        /// can tell a moved counter (re-solve is worth it) from a typo
        /// (fail fast instead of grinding 2^k hashes on a bad password).
        std::string password_fp;
        std::optional<std::uint64_t> lamport_index;
    };

    /// Fingerprint used in Entry::password_fp.
    static std::string fingerprint(std::string_view password, const HashConfig& cfg);

    std::optional<Entry> lookup(const std::string& user_id) const;
    void remember(const std::string& user_id, Entry entry);
    void forget(const std::string& user_id);

    /// JSON file round-trip for the CLI. Loading a missing file yields an
    /// empty cache.
    static ClientCache load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

  private:
    std::map<std::string, Entry> entries_;
};

struct LoginOptions {
    Variant variant = Variant::Base;
    /// Lamport only: index i such that the server currently holds H^i(P).
    /// Falls back to the cached index, then to the enrollment default.
    std::optional<std::uint64_t> lamport_index;
};

struct LoginResult {
    bool success = false;
    /// The puzzle had no solution — a corrupted challenge, or a wrong
    /// password under the offline-resistant variant.
    bool puzzle_not_found = false;
    bool used_cache = false;
    std::uint64_t solve_evaluations = 0;
    double solve_seconds = 0.0;
    std::uint32_t k_bits = 0;
};

/// Runs the full login: LOGIN/CHALLENGE on one connection, local puzzle
/// solve, RESPOND/RESULT on a second. With a cache, tries the remembered
/// computation first and only solves afresh when the server rejects it.
/// Throws NetworkError / ProtocolError on transport or grammar trouble.
LoginResult client_login(const std::string& host, std::uint16_t port,
                         const std::string& user_id, const std::string& password,
                         const LoginOptions& options = {}, ClientCache* cache = nullptr,
                         const HashConfig& cfg = HashConfig::sha256());

}  // namespace compchall
