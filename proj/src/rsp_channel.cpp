#include "chessy/rsp_channel.hpp"

#include "chessy/errors.hpp"
#include "chessy/hex.hpp"
#include "chessy/rsp.hpp"

namespace chessy {

RspChannel::RspChannel(TcpStream stream, int recv_timeout_ms, bool ack_with_reply)
    : stream_(std::move(stream)), ack_with_reply_(ack_with_reply) {
    if (recv_timeout_ms > 0)
        stream_.set_recv_timeout_ms(recv_timeout_ms);
}

void RspChannel::send_packet(std::string_view raw_payload) {
    // build the frame in the reused buffer; a pending '+' ack rides in the
    // same syscall
    std::string storage;
    std::string_view body = raw_payload;
    if (!rsp::clean_payload(raw_payload)) {
        storage = rsp::escape(raw_payload);
        body = storage;
    }
    last_frame_.clear();
    last_frame_.reserve(body.size() + 4);
    last_frame_.push_back('$');
    last_frame_.append(body);
    last_frame_.push_back('#');
    const std::uint8_t sum = rsp::checksum(body);
    last_frame_.push_back(kHexDigits[sum >> 4]);
    last_frame_.push_back(kHexDigits[sum & 0xF]);
    if (ack_owed_) {
        ack_owed_ = false;
        stream_.send_all("+", last_frame_);
    } else {
        stream_.send_all(last_frame_);
    }
}

bool RspChannel::fill() {
    constexpr std::size_t kChunk = 16384;
    const std::size_t old = rxbuf_.size();
    rxbuf_.resize(old + kChunk);
    const std::size_t n = stream_.recv_some(rxbuf_.data() + old, kChunk);
    rxbuf_.resize(old + n);
    return n != 0;
}

std::string RspChannel::recv_packet() {
    for (;;) {
        std::size_t i = 0;
        while (i < rxbuf_.size()) {
            const char c = rxbuf_[i];
            if (c == '+') {
                ++i;
            } else if (c == '-') {
                if (!last_frame_.empty())
                    stream_.send_all(last_frame_);
                ++i;
            } else if (c == '$') {
                break;
            } else {
                throw FramingError("unexpected byte on link");
            }
        }
        rxbuf_.erase(0, i);

        if (!rxbuf_.empty()) {
            const auto hash = rxbuf_.find('#');
            if (hash != std::string::npos && rxbuf_.size() >= hash + 3) {
                bool checksum_ok = true;
                std::string payload;
                try {
                    payload = rsp::parse_frame(std::string_view(rxbuf_).substr(0, hash + 3));
                } catch (const ChecksumMismatch&) {
                    checksum_ok = false;
                }
                rxbuf_.erase(0, hash + 3);
                if (checksum_ok) {
                    if (ack_with_reply_)
                        ack_owed_ = true;
                    else
                        stream_.send_all("+");
                    return payload;
                }
                stream_.send_all("-"); // peer retransmits
                continue;
            }
        }
        if (!fill())
            throw LinkError("connection closed by peer");
    }
}

} // namespace chessy
