#include "netio.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "compchall/errors.hpp"
#include "compchall/wire.hpp"

namespace compchall::net {

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

Socket::~Socket() { close(); }

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Socket connect_to(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr) {
        throw NetworkError("cannot resolve " + host);
    }
    Socket sock(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (!sock.valid()) {
        ::freeaddrinfo(res);
        throw NetworkError(std::string("socket: ") + std::strerror(errno));
    }
    const int rc = ::connect(sock.fd(), res->ai_addr, res->ai_addrlen);
    ::freeaddrinfo(res);
    if (rc != 0) {
        throw NetworkError("connect to " + host + ":" + service + ": " +
                           std::strerror(errno));
    }
    return sock;
}

void set_recv_timeout(const Socket& sock, int seconds) {
    timeval tv{};
    tv.tv_sec = seconds;
    ::setsockopt(sock.fd(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void send_line(const Socket& sock, std::string_view line) {
    std::string buf(line);
    buf += "\r\n";
    std::size_t sent = 0;
    while (sent < buf.size()) {
        const ssize_t n = ::send(sock.fd(), buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw NetworkError(std::string("send: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> recv_line(const Socket& sock, std::size_t max_len) {
    std::string line;
    char c = 0;
    while (true) {
        const ssize_t n = ::recv(sock.fd(), &c, 1, 0);
        if (n == 0) {
            if (line.empty()) {
                return std::nullopt;
            }
            throw NetworkError("connection closed mid-line");
        }
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            if (errno == EAGAIN || errno == EWOULDBLOCK) {
                throw NetworkError("read timed out");
            }
            throw NetworkError(std::string("recv: ") + std::strerror(errno));
        }
        if (c == '\n') {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            return line;
        }
        if (line.size() >= max_len) {
            throw ProtocolError("oversize", "line exceeds " + std::to_string(max_len) +
                                                " bytes");
        }
        line.push_back(c);
    }
}

}  // namespace compchall::net
