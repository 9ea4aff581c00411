#pragma once

/// Per-user record storage: the only mutable state the stateless protocol
/// permits. Provides enrollment for all three variants, per-user
/// serialized read-verify-apply transactions, and a line-delimited JSON
/// store file with atomic (write-temp-then-rename) persistence.
///
/// Base and offline-resistant records hold the password in plaintext —
/// the server-side MAC computation needs H(r, P), so there is no way
/// around it in those variants. The Lamport variant exists precisely to
/// avoid this; choose it where server compromise is the concern.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compchall/errors.hpp"
#include "compchall/protocol.hpp"

namespace compchall {

struct UserRecord {
    std::string user_id;
    AccountState account;
    std::int64_t created_at = 0;  // unix seconds, informational only
    std::int64_t updated_at = 0;  // never part of any hash input
};

inline constexpr int kStoreFormatVersion = 1;

class Store {
  public:
    explicit Store(HashConfig hash = HashConfig::sha256(),
                   std::uint32_t default_k_bits = kDefaultKBits);

    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    ~Store();

    const HashConfig& hash_config() const { return hash_; }
    std::uint32_t default_k_bits() const { return default_k_bits_; }

    /// Creates a record: Base/OfflineResistant keep the password, Lamport
    /// keeps (H^m(P), m). Throws EnrollmentError on duplicates or m < 1.
    UserRecord enroll(std::string_view user_id, std::string_view password, Variant variant,
                      std::uint64_t chain_length = kDefaultChainLength);

    bool contains(std::string_view user_id) const;
    std::size_t size() const;
    std::vector<std::string> user_ids() const;
    UserRecord get(std::string_view user_id) const;

    /// Runs `txn` against a consistent snapshot of the user's record and
    /// atomically applies any VerifyOutcome it returns, all under the
    /// user's lock. Transactions on distinct users interleave freely. If
    /// the transaction throws, the record is left untouched.
    ///
    /// Throws UnknownUserError when the user does not exist.
    template <typename Fn>
    auto with_record(std::string_view user_id, Fn&& txn);

    /// Persist to `path` after every mutating transaction from now on.
    void bind(std::filesystem::path path);
    const std::optional<std::filesystem::path>& bound_path() const { return path_; }

    /// Writes the whole store as header + one JSON record per line, via a
    /// temp file and atomic rename.
    void save(const std::filesystem::path& path) const;

    /// Loads a store file. When `require_algorithm` is given, a header
    /// naming a different hash algorithm is an IncompatibleStoreError.
    /// Malformed content raises StoreParseError with the line number.
    static Store load(const std::filesystem::path& path,
                      std::optional<std::string> require_algorithm = std::nullopt);

    /// Test hook: invoked between the in-memory mutation and the persist
    /// write, so crash-consistency tests can simulate dying in between.
    void set_persist_hook(std::function<void()> hook);

  private:
    struct Slot {
        mutable std::mutex mtx;
        UserRecord record;
    };

    std::shared_ptr<Slot> find_slot(std::string_view user_id) const;
    void persist_after_mutation();

    HashConfig hash_;
    std::uint32_t default_k_bits_ = kDefaultKBits;
    std::optional<std::filesystem::path> path_;
    std::function<void()> persist_hook_;

    mutable std::shared_mutex map_mtx_;
    mutable std::mutex persist_mtx_;  // serializes whole-file writes
    std::map<std::string, std::shared_ptr<Slot>, std::less<>> slots_;
};

template <typename Fn>
auto Store::with_record(std::string_view user_id, Fn&& txn) {
    std::shared_ptr<Slot> slot = find_slot(user_id);
    if (!slot) {
        throw UnknownUserError("no such user: " + std::string(user_id));
    }
    bool mutated = false;
    std::unique_lock lock(slot->mtx);
    // txn: (const UserRecord&) -> std::pair<T, std::optional<VerifyOutcome>>
    auto [result, outcome] = txn(static_cast<const UserRecord&>(slot->record));
    if (outcome.has_value()) {
        apply_outcome(slot->record.account, *outcome);
        slot->record.updated_at =
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        mutated = true;
    }
    lock.unlock();
    if (mutated) {
        persist_after_mutation();
    }
    return result;
}

}  // namespace compchall
