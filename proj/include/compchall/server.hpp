#pragma once

/// Reference TCP server. One request per connection, per the protocol's
/// two-connection login flow: LOGIN -> CHALLENGE, then on a fresh
/// connection RESPOND -> RESULT. The server holds no state between the
/// two beyond the user store, so per-connection memory is a constant and
/// a restart between the phases is invisible to clients.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "compchall/entropy.hpp"
#include "compchall/protocol.hpp"
#include "compchall/userstore.hpp"

namespace compchall {

struct ServerConfig {
    ServerKey key{};
    HashConfig hash = HashConfig::sha256();
    std::uint32_t k_bits = kDefaultKBits;
    Variant default_variant = Variant::Base;
    int read_timeout_secs = 10;

    /// JSON config with keys key_hex, k_bits, hash, default_variant,
    /// read_timeout_secs. COMPCHALL_KEY in the environment overrides
    /// key_hex. Warns on stderr when the file is group/other readable —
    /// it holds the server secret.
    static ServerConfig from_file(const std::filesystem::path& path);

    void validate() const;
};

class Server {
  public:
    /// `entropy` may be swapped for a seeded source in tests; defaults to
    /// the OS CSPRNG.
    Server(ServerConfig config, std::shared_ptr<Store> store,
           std::unique_ptr<EntropySource> entropy = nullptr);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting. port 0 picks an ephemeral port.
    /// Throws NetworkError on bind failure.
    void start(const std::string& bind_addr = "127.0.0.1", std::uint16_t port = 0);

    std::uint16_t port() const;

    /// Stops accepting, unblocks in-flight connections, joins all workers.
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace compchall
