#pragma once

// Minimal POSIX TCP plumbing shared by the reference server and client.
// Internal to the library; not installed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace compchall::net {

class Socket {
  public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket();

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void close();

  private:
    int fd_ = -1;
};

/// Connects to host:port (IPv4 dotted quad or name). Throws NetworkError.
Socket connect_to(const std::string& host, std::uint16_t port);

/// SO_RCVTIMEO; 0 disables.
void set_recv_timeout(const Socket& sock, int seconds);

/// Sends `line` + CRLF, handling partial writes. Throws NetworkError.
void send_line(const Socket& sock, std::string_view line);

/// Reads one LF-terminated line, stripping CRLF. Returns nullopt on clean
/// EOF before any data. Throws NetworkError on timeout/reset and
/// ProtocolError("oversize") when a line exceeds max_len.
std::optional<std::string> recv_line(const Socket& sock, std::size_t max_len);

}  // namespace compchall::net
