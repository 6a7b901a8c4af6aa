#include "chessy/net.hpp"

#include <cerrno>
#include <cstring>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include "chessy/errors.hpp"

namespace chessy {

namespace {

void set_nodelay(int fd) {
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

struct AddrInfo {
    addrinfo* res = nullptr;
    ~AddrInfo() {
        if (res)
            ::freeaddrinfo(res);
    }
};

addrinfo* resolve(const std::string& host, std::uint16_t port, AddrInfo& holder, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    if (passive)
        hints.ai_flags = AI_PASSIVE;
    const std::string service = std::to_string(port);
    const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints,
                                 &holder.res);
    if (rc != 0)
        throw LinkError("cannot resolve '" + host + "': " + gai_strerror(rc));
    return holder.res;
}

} // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
    if (fd_ >= 0)
        set_nodelay(fd_);
}

TcpStream::~TcpStream() {
    close();
}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port) {
    AddrInfo holder;
    addrinfo* ai = resolve(host, port, holder, false);
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0)
        throw LinkError(std::string("socket: ") + std::strerror(errno));
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) != 0) {
        const int err = errno;
        ::close(fd);
        throw LinkError("connect to " + host + ":" + std::to_string(port) + ": " +
                        std::strerror(err));
    }
    return TcpStream(fd);
}

void TcpStream::send_all(std::string_view data) {
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
        const ssize_t n = ::send(fd_, p, left, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw LinkError(std::string("send: ") + std::strerror(errno));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
}

void TcpStream::send_all(std::string_view head, std::string_view tail) {
    iovec iov[2];
    iov[0].iov_base = const_cast<char*>(head.data());
    iov[0].iov_len = head.size();
    iov[1].iov_base = const_cast<char*>(tail.data());
    iov[1].iov_len = tail.size();
    msghdr msg{};
    msg.msg_iov = iov;
    msg.msg_iovlen = 2;
    const ssize_t n = ::sendmsg(fd_, &msg, MSG_NOSIGNAL);
    if (n < 0) {
        if (errno == EINTR) {
            send_all(head);
            send_all(tail);
            return;
        }
        throw LinkError(std::string("sendmsg: ") + std::strerror(errno));
    }
    const std::size_t sent = static_cast<std::size_t>(n);
    if (sent < head.size()) {
        send_all(head.substr(sent));
        send_all(tail);
    } else if (sent < head.size() + tail.size()) {
        send_all(tail.substr(sent - head.size()));
    }
}

std::size_t TcpStream::recv_some(char* buf, std::size_t max) {
    for (;;) {
        const ssize_t n = ::recv(fd_, buf, max, 0);
        if (n >= 0)
            return static_cast<std::size_t>(n);
        if (errno == EINTR)
            continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK)
            throw LinkTimeout("receive timeout");
        throw LinkError(std::string("recv: ") + std::strerror(errno));
    }
}

void TcpStream::set_recv_timeout_ms(int ms) {
    timeval tv{};
    tv.tv_sec = ms / 1000;
    tv.tv_usec = (ms % 1000) * 1000;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

TcpListener::~TcpListener() {
    close();
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
        port_ = other.port_;
    }
    return *this;
}

void TcpListener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpListener TcpListener::bind(const std::string& host, std::uint16_t port) {
    AddrInfo holder;
    addrinfo* ai = resolve(host, port, holder, true);
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0)
        throw LinkError(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(fd, 1) != 0) {
        const int err = errno;
        ::close(fd);
        throw LinkError("bind " + host + ":" + std::to_string(port) + ": " + std::strerror(err));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
    TcpListener lis;
    lis.fd_ = fd;
    lis.port_ = ntohs(bound.sin_port);
    return lis;
}

TcpStream TcpListener::accept() {
    for (;;) {
        const int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0)
            return TcpStream(fd);
        if (errno == EINTR)
            continue;
        throw LinkError(std::string("accept: ") + std::strerror(errno));
    }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= endpoint.size())
        throw ConfigError("endpoint must be HOST:PORT, got '" + endpoint + "'");
    const std::string host = endpoint.substr(0, colon);
    const std::string port_str = endpoint.substr(colon + 1);
    try {
        std::size_t pos = 0;
        const unsigned long port = std::stoul(port_str, &pos);
        if (pos != port_str.size() || port > 65535)
            throw std::invalid_argument(port_str);
        return {host, static_cast<std::uint16_t>(port)};
    } catch (const std::exception&) {
        throw ConfigError("bad port in endpoint '" + endpoint + "'");
    }
}

} // namespace chessy
