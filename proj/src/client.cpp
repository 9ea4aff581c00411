#include "compchall/client.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "compchall/errors.hpp"
#include "compchall/wire.hpp"
#include "netio.hpp"

namespace compchall {

namespace {

using nlohmann::json;

/// One request/reply on a fresh connection; the server closes after
/// replying, we close after reading.
wire::Message exchange(const std::string& host, std::uint16_t port,
                       const wire::Message& request) {
    net::Socket sock = net::connect_to(host, port);
    net::set_recv_timeout(sock, 30);
    net::send_line(sock, wire::encode_message(request));
    const auto line = net::recv_line(sock, wire::kMaxLineLen);
    if (!line.has_value()) {
        throw NetworkError("server closed the connection without replying");
    }
    return wire::decode_message(*line);
}

bool expect_result(const wire::Message& msg) {
    if (const auto* result = std::get_if<wire::Result>(&msg)) {
        return result->success;
    }
    if (const auto* err = std::get_if<wire::Err>(&msg)) {
        throw ProtocolError(err->code, "server error: " + err->code);
    }
    throw ProtocolError("unexpected", "expected RESULT");
}

Challenge expect_challenge(const wire::Message& msg) {
    if (const auto* challenge = std::get_if<wire::ChallengeMsg>(&msg)) {
        return challenge->challenge;
    }
    if (const auto* err = std::get_if<wire::Err>(&msg)) {
        throw ProtocolError(err->code, "server error: " + err->code);
    }
    throw ProtocolError("unexpected", "expected CHALLENGE");
}

}  // namespace

std::string ClientCache::fingerprint(std::string_view password, const HashConfig& cfg) {
    // Single-field Proof tuple; injective encoding keeps it distinct from
    // the protocol's two-field H(r, P).
    return hash_tuple(FieldTag::Proof, {utf8_bytes(password)}, cfg).hex();
}

std::optional<ClientCache::Entry> ClientCache::lookup(const std::string& user_id) const {
    auto it = entries_.find(user_id);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ClientCache::remember(const std::string& user_id, Entry entry) {
    entries_[user_id] = std::move(entry);
}

void ClientCache::forget(const std::string& user_id) { entries_.erase(user_id); }

ClientCache ClientCache::load(const std::filesystem::path& path) {
    ClientCache cache;
    std::ifstream in(path);
    if (!in) {
        return cache;
    }
    json j;
    try {
        in >> j;
        for (const auto& [user, je] : j.at("entries").items()) {
            Entry e;
            e.r = je.value("r", std::uint32_t{0});
            e.mac_hex = je.value("mac", std::string{});
            e.password_fp = je.value("password_fp", std::string{});
            if (je.contains("lamport_index")) {
                e.lamport_index = je.at("lamport_index").get<std::uint64_t>();
            }
            cache.entries_[user] = std::move(e);
        }
    } catch (const std::exception&) {
        return ClientCache{};  // stale or corrupt cache: start fresh
    }
    return cache;
}

void ClientCache::save(const std::filesystem::path& path) const {
    json entries = json::object();
    for (const auto& [user, e] : entries_) {
        json je;
        je["r"] = e.r;
        je["mac"] = e.mac_hex;
        je["password_fp"] = e.password_fp;
        if (e.lamport_index.has_value()) {
            je["lamport_index"] = *e.lamport_index;
        }
        entries[user] = std::move(je);
    }
    json j;
    j["entries"] = std::move(entries);
    std::ofstream out(path, std::ios::trunc);
    out << j.dump() << '\n';
}

namespace {

LoginResult fresh_login(const std::string& host, std::uint16_t port,
                        const std::string& user_id, const std::string& password,
                        Variant variant, std::uint64_t lamport_index, ClientCache* cache,
                        const HashConfig& cfg) {
    LoginResult result;

    const Challenge challenge =
        expect_challenge(exchange(host, port, wire::Login{user_id}));
    result.k_bits = challenge.k_bits;

    const std::optional<std::string_view> solver_password =
        variant == Variant::OfflineResistant ? std::optional<std::string_view>(password)
                                             : std::nullopt;
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult solved = solve_puzzle(challenge.puzzle_digest, challenge.salt,
                                            challenge.k_bits, variant, solver_password, cfg);
    result.solve_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    result.solve_evaluations = solved.evaluations;
    if (!solved.r.has_value()) {
        result.puzzle_not_found = true;
        return result;
    }

    ResponsePayload payload =
        variant == Variant::Lamport
            ? make_lamport_response(user_id, *solved.r, password, lamport_index,
                                    challenge.mac, cfg)
            : make_response(variant, user_id, *solved.r, password, challenge.mac, cfg);
    result.success = expect_result(exchange(host, port, wire::Respond{std::move(payload)}));

    if (result.success && cache != nullptr) {
        ClientCache::Entry entry;
        entry.r = *solved.r;
        entry.mac_hex = challenge.mac.hex();
        entry.password_fp = ClientCache::fingerprint(password, cfg);
        if (variant == Variant::Lamport) {
            entry.lamport_index = lamport_index - 1;  // chain advanced server-side
        }
        cache->remember(user_id, entry);
    }
    return result;
}

}  // namespace

LoginResult client_login(const std::string& host, std::uint16_t port,
                         const std::string& user_id, const std::string& password,
                         const LoginOptions& options, ClientCache* cache,
                         const HashConfig& cfg) {
    const std::optional<ClientCache::Entry> cached =
        cache != nullptr ? cache->lookup(user_id) : std::nullopt;

    if (options.variant == Variant::Lamport) {
        std::uint64_t index = kDefaultChainLength;
        if (cached.has_value() && cached->lamport_index.has_value()) {
            index = *cached->lamport_index;
        }
        if (options.lamport_index.has_value()) {
            index = *options.lamport_index;
        }
        return fresh_login(host, port, user_id, password, options.variant, index, cache, cfg);
    }

    // Reuse path: rebuild H(r, P) from the remembered nonce and echo the
    // remembered MAC. Valid exactly as long as no failure advanced n.
    if (cached.has_value() && !cached->mac_hex.empty()) {
        ResponsePayload payload =
            make_response(options.variant, user_id, cached->r, password,
                          Digest::from_hex_string(cached->mac_hex), cfg);
        LoginResult result;
        result.used_cache = true;
        result.success =
            expect_result(exchange(host, port, wire::Respond{std::move(payload)}));
        if (result.success) {
            return result;
        }
        // The failed replay advanced n, so this entry is dead either way.
        cache->forget(user_id);
        if (cached->password_fp != ClientCache::fingerprint(password, cfg)) {
            // The typed password is not the one that succeeded before; the
            // rejection is almost certainly a typo, not a moved counter.
            // Fail fast rather than grinding a full puzzle on a bad guess.
            return result;
        }
    }
    return fresh_login(host, port, user_id, password, options.variant, 0, cache, cfg);
}

}  // namespace compchall
