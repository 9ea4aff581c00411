#include "compchall/userstore.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace compchall {

namespace {

using nlohmann::json;

std::int64_t now_unix_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

json record_to_json(const UserRecord& rec) {
    json j;
    j["user"] = rec.user_id;
    j["variant"] = std::string(variant_name(rec.account.variant));
    j["n"] = rec.account.fail_count;
    j["created_at"] = rec.created_at;
    j["updated_at"] = rec.updated_at;
    if (const auto* pw = std::get_if<PasswordSecret>(&rec.account.secret)) {
        j["password"] = to_hex(pw->password);
    } else {
        const auto& chain = std::get<ChainSecret>(rec.account.secret);
        j["chain_head"] = to_hex(chain.head);
        j["chain_index"] = chain.index;
    }
    return j;
}

UserRecord record_from_json(const json& j) {
    UserRecord rec;
    rec.user_id = j.at("user").get<std::string>();
    const auto variant = variant_from_name(j.at("variant").get<std::string>());
    if (!variant.has_value()) {
        throw std::invalid_argument("unknown variant \"" +
                                    j.at("variant").get<std::string>() + "\"");
    }
    rec.account.variant = *variant;
    rec.account.fail_count = j.at("n").get<std::uint64_t>();
    rec.created_at = j.value("created_at", std::int64_t{0});
    rec.updated_at = j.value("updated_at", std::int64_t{0});
    if (rec.account.variant == Variant::Lamport) {
        rec.account.secret = ChainSecret{from_hex(j.at("chain_head").get<std::string>()),
                                         j.at("chain_index").get<std::uint64_t>()};
    } else {
        rec.account.secret = PasswordSecret{from_hex(j.at("password").get<std::string>())};
    }
    return rec;
}

}  // namespace

Store::Store(HashConfig hash, std::uint32_t default_k_bits)
    : hash_(std::move(hash)), default_k_bits_(default_k_bits) {}

Store::Store(Store&& other) noexcept
    : hash_(std::move(other.hash_)),
      default_k_bits_(other.default_k_bits_),
      path_(std::move(other.path_)),
      persist_hook_(std::move(other.persist_hook_)) {
    std::unique_lock lock(other.map_mtx_);
    slots_ = std::move(other.slots_);
}

Store& Store::operator=(Store&& other) noexcept {
    if (this != &other) {
        std::scoped_lock locks(map_mtx_, other.map_mtx_);
        hash_ = std::move(other.hash_);
        default_k_bits_ = other.default_k_bits_;
        path_ = std::move(other.path_);
        persist_hook_ = std::move(other.persist_hook_);
        slots_ = std::move(other.slots_);
    }
    return *this;
}

Store::~Store() = default;

UserRecord Store::enroll(std::string_view user_id, std::string_view password, Variant variant,
                         std::uint64_t chain_length) {
    if (user_id.empty()) {
        throw EnrollmentError("user id must not be empty");
    }
    UserRecord rec;
    rec.user_id = std::string(user_id);
    rec.account.variant = variant;
    rec.account.fail_count = 0;
    rec.created_at = rec.updated_at = now_unix_seconds();
    if (variant == Variant::Lamport) {
        if (chain_length < 1) {
            throw EnrollmentError("Lamport chain length must be at least 1");
        }
        rec.account.secret =
            ChainSecret{hash_chain(utf8_bytes(password), chain_length, hash_), chain_length};
    } else {
        rec.account.secret = PasswordSecret{utf8_bytes(password)};
    }

    {
        std::unique_lock lock(map_mtx_);
        auto [it, inserted] = slots_.try_emplace(rec.user_id, std::make_shared<Slot>());
        if (!inserted) {
            throw EnrollmentError("user already enrolled: " + rec.user_id);
        }
        it->second->record = rec;
    }
    persist_after_mutation();
    return rec;
}

bool Store::contains(std::string_view user_id) const {
    std::shared_lock lock(map_mtx_);
    return slots_.find(user_id) != slots_.end();
}

std::size_t Store::size() const {
    std::shared_lock lock(map_mtx_);
    return slots_.size();
}

std::vector<std::string> Store::user_ids() const {
    std::shared_lock lock(map_mtx_);
    std::vector<std::string> ids;
    ids.reserve(slots_.size());
    for (const auto& [id, slot] : slots_) {
        ids.push_back(id);
    }
    return ids;
}

UserRecord Store::get(std::string_view user_id) const {
    std::shared_ptr<Slot> slot = find_slot(user_id);
    if (!slot) {
        throw UnknownUserError("no such user: " + std::string(user_id));
    }
    std::lock_guard lock(slot->mtx);
    return slot->record;
}

std::shared_ptr<Store::Slot> Store::find_slot(std::string_view user_id) const {
    std::shared_lock lock(map_mtx_);
    auto it = slots_.find(user_id);
    return it == slots_.end() ? nullptr : it->second;
}

void Store::bind(std::filesystem::path path) {
    path_ = std::move(path);
    save(*path_);
}

void Store::set_persist_hook(std::function<void()> hook) {
    persist_hook_ = std::move(hook);
}

void Store::persist_after_mutation() {
    if (persist_hook_) {
        persist_hook_();
    }
    if (path_.has_value()) {
        save(*path_);
    }
}

void Store::save(const std::filesystem::path& path) const {
    // Snapshot and write under one lock: whichever save lands last is
    // guaranteed to contain every transaction completed before it.
    std::lock_guard persist_lock(persist_mtx_);

    json header;
    header["format_version"] = kStoreFormatVersion;
    header["hash"] = hash_.algorithm;
    header["k_bits"] = default_k_bits_;
    header["note"] =
        "base/offline records hold the password in plaintext (the server-side "
        "MAC needs H(r,P)); enroll with the lamport variant if server "
        "compromise is a concern";

    std::ostringstream body;
    body << header.dump() << '\n';
    {
        std::shared_lock lock(map_mtx_);
        for (const auto& [id, slot] : slots_) {
            std::lock_guard slot_lock(slot->mtx);
            body << record_to_json(slot->record).dump() << '\n';
        }
    }

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw StoreError("cannot open " + tmp.string() + " for writing");
        }
        out << body.str();
        out.flush();
        if (!out) {
            throw StoreError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw StoreError("atomic rename to " + path.string() + " failed: " + ec.message());
    }
}

Store Store::load(const std::filesystem::path& path,
                  std::optional<std::string> require_algorithm) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StoreError("cannot open store file " + path.string());
    }

    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw StoreParseError(1, "missing header line");
    }
    ++line_no;
    json header;
    try {
        header = json::parse(line);
        const int version = header.at("format_version").get<int>();
        if (version != kStoreFormatVersion) {
            throw IncompatibleStoreError("store format_version " + std::to_string(version) +
                                         " not supported (expected " +
                                         std::to_string(kStoreFormatVersion) + ")");
        }
    } catch (const IncompatibleStoreError&) {
        throw;
    } catch (const std::exception& e) {
        throw StoreParseError(line_no, e.what());
    }

    const auto algorithm = header.at("hash").get<std::string>();
    if (require_algorithm.has_value() && algorithm != *require_algorithm) {
        throw IncompatibleStoreError("store hash algorithm \"" + algorithm +
                                     "\" does not match configured \"" + *require_algorithm +
                                     "\"");
    }

    Store store(HashConfig::for_algorithm(algorithm),
                header.value("k_bits", kDefaultKBits));
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        UserRecord rec;
        try {
            rec = record_from_json(json::parse(line));
        } catch (const std::exception& e) {
            throw StoreParseError(line_no, e.what());
        }
        auto slot = std::make_shared<Slot>();
        slot->record = std::move(rec);
        auto [it, inserted] = store.slots_.try_emplace(slot->record.user_id, std::move(slot));
        if (!inserted) {
            throw StoreParseError(line_no, "duplicate user id");
        }
    }
    return store;
}

}  // namespace compchall
