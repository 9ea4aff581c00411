#include "compchall/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "compchall/errors.hpp"
#include "compchall/wire.hpp"
#include "netio.hpp"

namespace compchall {

ServerConfig ServerConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }

    ServerConfig cfg;
    if (j.contains("hash")) {
        cfg.hash = HashConfig::for_algorithm(j.at("hash").get<std::string>());
    }
    cfg.k_bits = j.value("k_bits", kDefaultKBits);
    cfg.read_timeout_secs = j.value("read_timeout_secs", 10);
    if (j.contains("default_variant")) {
        const auto v = variant_from_name(j.at("default_variant").get<std::string>());
        if (!v.has_value()) {
            throw ConfigError("config: unknown default_variant");
        }
        cfg.default_variant = *v;
    }

    std::string key_hex;
    if (const char* env = std::getenv("COMPCHALL_KEY"); env != nullptr && *env != '\0') {
        key_hex = env;
    } else if (j.contains("key_hex")) {
        key_hex = j.at("key_hex").get<std::string>();
    } else {
        throw ConfigError("config: key_hex missing and COMPCHALL_KEY not set");
    }
    cfg.key = ServerKey::from_hex_string(key_hex);

    struct stat st{};
    if (::stat(path.c_str(), &st) == 0 && (st.st_mode & (S_IRGRP | S_IROTH)) != 0) {
        std::cerr << "warning: " << path.string()
                  << " is readable by group/other but holds the server key\n";
    }

    cfg.validate();
    return cfg;
}

void ServerConfig::validate() const {
    PuzzleParams{k_bits}.validate_policy();
    if (read_timeout_secs < 0) {
        throw ConfigError("read_timeout_secs must be non-negative");
    }
}

struct Server::Impl {
    ServerConfig config;
    std::shared_ptr<Store> store;
    std::unique_ptr<EntropySource> entropy;
    std::mutex entropy_mtx;

    net::Socket listener;
    std::uint16_t bound_port = 0;
    std::atomic<bool> stopping{false};
    std::thread accept_thread;

    std::mutex conn_mtx;
    std::condition_variable conn_done;
    std::unordered_set<int> active_fds;
    int active_count = 0;

    wire::Message handle_login(const std::string& user_id) {
        const PuzzleParams params{config.k_bits};
        auto issue = [&](const AccountState& account) {
            std::lock_guard lock(entropy_mtx);
            return gen_challenge(account, user_id, params, config.key, *entropy, config.hash);
        };
        if (store->contains(user_id)) {
            return store->with_record(user_id, [&](const UserRecord& rec) {
                return std::pair{wire::Message{wire::ChallengeMsg{issue(rec.account)}},
                                 std::optional<VerifyOutcome>{}};
            });
        }
        // Unknown user: answer with a decoy challenge from a keyed phantom
        // account instead of leaking which ids exist.
        const AccountState phantom =
            make_phantom_account(user_id, config.default_variant, config.key, config.hash);
        return wire::Message{wire::ChallengeMsg{issue(phantom)}};
    }

    wire::Message handle_respond(const ResponsePayload& payload) {
        try {
            const bool ok = store->with_record(payload.user_id, [&](const UserRecord& rec) {
                VerifyOutcome outcome = verify_response(rec.account, rec.user_id, payload,
                                                        config.key, config.hash);
                return std::pair{outcome.success, std::optional<VerifyOutcome>{outcome}};
            });
            return wire::Result{ok};
        } catch (const UnknownUserError&) {
            // Same wire answer as a bad password; enumeration stays hard.
            return wire::Result{false};
        } catch (const ChainExhaustedError&) {
            return wire::Result{false};
        }
    }

    void handle_connection(const net::Socket& sock) {
        net::set_recv_timeout(sock, config.read_timeout_secs);
        try {
            const auto line = net::recv_line(sock, wire::kMaxLineLen);
            if (!line.has_value()) {
                return;  // peer connected and went away
            }
            const wire::Message request = wire::decode_message(*line);
            wire::Message reply;
            if (const auto* login = std::get_if<wire::Login>(&request)) {
                reply = handle_login(login->user_id);
            } else if (const auto* respond = std::get_if<wire::Respond>(&request)) {
                reply = handle_respond(respond->payload);
            } else {
                reply = wire::Err{"unexpected"};
            }
            net::send_line(sock, wire::encode_message(reply));
        } catch (const ProtocolError& e) {
            try {
                net::send_line(sock, wire::encode_message(wire::Err{e.code()}));
            } catch (...) {
            }
        } catch (const std::exception&) {
            // Per-connection failures (timeouts, resets) never touch other
            // connections; just drop this one.
        }
    }

    void accept_loop() {
        while (!stopping.load()) {
            pollfd pfd{listener.fd(), POLLIN, 0};
            const int rc = ::poll(&pfd, 1, 200);
            if (rc <= 0) {
                continue;
            }
            const int fd = ::accept(listener.fd(), nullptr, nullptr);
            if (fd < 0) {
                continue;
            }
            {
                std::lock_guard lock(conn_mtx);
                active_fds.insert(fd);
                ++active_count;
            }
            std::thread([this, fd] {
                net::Socket sock(fd);
                handle_connection(sock);
                // Deregister before the socket closes so stop() never
                // shuts down a recycled descriptor.
                std::lock_guard lock(conn_mtx);
                active_fds.erase(fd);
                if (--active_count == 0) {
                    conn_done.notify_all();
                }
            }).detach();
        }
    }
};

Server::Server(ServerConfig config, std::shared_ptr<Store> store,
               std::unique_ptr<EntropySource> entropy)
    : impl_(std::make_unique<Impl>()) {
    config.validate();
    impl_->config = std::move(config);
    impl_->store = std::move(store);
    impl_->entropy = entropy ? std::move(entropy) : std::make_unique<SystemEntropy>();
}

Server::~Server() { stop(); }

void Server::start(const std::string& bind_addr, std::uint16_t port) {
    net::Socket sock(::socket(AF_INET, SOCK_STREAM, 0));
    if (!sock.valid()) {
        throw NetworkError(std::string("socket: ") + std::strerror(errno));
    }
    const int one = 1;
    ::setsockopt(sock.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
        throw NetworkError("bad bind address " + bind_addr);
    }
    if (::bind(sock.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw NetworkError("bind " + bind_addr + ":" + std::to_string(port) + ": " +
                           std::strerror(errno));
    }
    if (::listen(sock.fd(), 64) != 0) {
        throw NetworkError(std::string("listen: ") + std::strerror(errno));
    }

    socklen_t len = sizeof(addr);
    ::getsockname(sock.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    impl_->bound_port = ntohs(addr.sin_port);
    impl_->listener = std::move(sock);
    impl_->stopping = false;
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

std::uint16_t Server::port() const { return impl_->bound_port; }

void Server::stop() {
    if (!impl_ || !impl_->accept_thread.joinable()) {
        return;
    }
    impl_->stopping = true;
    impl_->accept_thread.join();
    impl_->listener.close();
    {
        // Unblock workers sitting in recv.
        std::unique_lock lock(impl_->conn_mtx);
        for (int fd : impl_->active_fds) {
            ::shutdown(fd, SHUT_RDWR);
        }
        impl_->conn_done.wait(lock, [this] { return impl_->active_count == 0; });
    }
}

}  // namespace compchall
