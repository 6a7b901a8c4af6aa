#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace chessy {

/// Blocking TCP connection with an optional receive timeout. Move-only RAII
/// around the file descriptor; TCP_NODELAY is always set.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd);
    ~TcpStream();

    TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    static TcpStream connect(const std::string& host, std::uint16_t port);

    void send_all(std::string_view data);

    /// Send two buffers as one syscall (writev).
    void send_all(std::string_view head, std::string_view tail);

    /// Up to `max` bytes; 0 means the peer closed. Throws LinkTimeout when a
    /// receive timeout is set and expires.
    std::size_t recv_some(char* buf, std::size_t max);

    void set_recv_timeout_ms(int ms); // 0 disables

    bool open() const { return fd_ >= 0; }
    void close();

private:
    int fd_ = -1;
};

/// Listening socket. Binding port 0 picks an ephemeral port, readable via
/// port() before accept().
class TcpListener {
public:
    TcpListener() = default;
    ~TcpListener();

    TcpListener(TcpListener&& other) noexcept : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}
    TcpListener& operator=(TcpListener&& other) noexcept;
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    static TcpListener bind(const std::string& host, std::uint16_t port);

    TcpStream accept();
    std::uint16_t port() const { return port_; }
    bool open() const { return fd_ >= 0; }
    void close();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Split "HOST:PORT"; throws ConfigError on anything else.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

} // namespace chessy
