#include "bitsync/transport.hpp"

#include "bitsync/errors.hpp"

#include <array>

namespace bitsync {

namespace {

constexpr std::uint8_t kFrameVersion = 1;

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k)
            c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v) | 0x80u);
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_varint(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    std::uint64_t v = 0;
    for (unsigned shift = 0; shift < 64; shift += 7) {
        if (pos >= bytes.size())
            throw FrameCorrupt("truncated varint");
        std::uint8_t b = bytes[pos++];
        v |= static_cast<std::uint64_t>(b & 0x7Fu) << shift;
        if ((b & 0x80u) == 0)
            return v;
    }
    throw FrameCorrupt("varint too long");
}

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::uint8_t b : bytes)
        c = kCrcTable[(c ^ b) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

Message make_message(Tag tag, std::uint64_t segment_id, BitSeq payload) {
    Message m;
    m.tag = tag;
    m.segment_id = segment_id;
    m.cost_bits = payload.size();
    m.payload = std::move(payload);
    return m;
}

BitSeq pack_uint(std::uint64_t value, std::size_t width) {
    if (width < 64 && width > 0 && (value >> width) != 0)
        throw DomainError("pack_uint: value does not fit");
    BitSeq out(width);
    for (std::size_t j = 0; j < width; ++j)
        if ((value >> (width - 1 - j)) & 1u)
            out.set_bit(j, true);
    return out;
}

std::uint64_t unpack_uint(const BitSeq& bits, std::size_t offset, std::size_t width) {
    if (offset + width > bits.size() || width > 64)
        throw DomainError("unpack_uint: out of range");
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < width; ++j)
        v = (v << 1) | static_cast<std::uint64_t>(bits.bit(offset + j));
    return v;
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    std::vector<std::uint8_t> body;
    body.push_back(kFrameVersion);
    put_varint(body, frame.round);
    put_varint(body, frame.messages.size());
    for (const Message& m : frame.messages) {
        body.push_back(static_cast<std::uint8_t>(m.tag));
        put_varint(body, m.segment_id);
        put_varint(body, m.payload.size());
        auto payload = m.payload.to_bytes();
        body.insert(body.end(), payload.begin(), payload.end());
    }
    std::uint32_t crc = crc32(body);

    std::vector<std::uint8_t> out;
    std::uint64_t total = body.size() + 4;
    out.reserve(total + 4);
    for (int s = 24; s >= 0; s -= 8)
        out.push_back(static_cast<std::uint8_t>(total >> s));
    out.insert(out.end(), body.begin(), body.end());
    for (int s = 24; s >= 0; s -= 8)
        out.push_back(static_cast<std::uint8_t>(crc >> s));
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4)
        throw FrameCorrupt("short frame");
    std::uint64_t total = 0;
    for (int i = 0; i < 4; ++i)
        total = (total << 8) | bytes[i];
    if (bytes.size() != total + 4)
        throw FrameCorrupt("length prefix mismatch");
    if (total < 5)
        throw FrameCorrupt("frame body too short");
    auto body = bytes.subspan(4, total - 4);
    auto crc_bytes = bytes.subspan(4 + body.size(), 4);
    std::uint32_t crc = 0;
    for (int i = 0; i < 4; ++i)
        crc = (crc << 8) | crc_bytes[i];
    if (crc != crc32(body))
        throw FrameCorrupt("checksum mismatch");
    if (body[0] != kFrameVersion)
        throw UnknownVersion("frame version " + std::to_string(body[0]));

    Frame frame;
    std::size_t pos = 1;
    frame.round = get_varint(body, pos);
    std::uint64_t count = get_varint(body, pos);
    frame.messages.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        if (pos >= body.size())
            throw FrameCorrupt("truncated message");
        std::uint8_t tag = body[pos++];
        if (tag < 1 || tag > 9)
            throw FrameCorrupt("unknown message tag");
        std::uint64_t segment_id = get_varint(body, pos);
        std::uint64_t nbits = get_varint(body, pos);
        std::uint64_t nbytes = (nbits + 7) / 8;
        if (pos + nbytes > body.size())
            throw FrameCorrupt("truncated payload");
        BitSeq payload = BitSeq::from_bytes(body.subspan(pos, nbytes), nbits);
        pos += nbytes;
        frame.messages.push_back(make_message(static_cast<Tag>(tag), segment_id,
                                              std::move(payload)));
    }
    if (pos != body.size())
        throw FrameCorrupt("trailing bytes in frame");
    return frame;
}

void Endpoint::send(const Frame& frame) {
    auto bytes = encode_frame(frame);
    std::unique_lock<std::mutex> lock(tx_->mu);
    if (tx_->closed)
        throw TransportClosed("send on closed channel");
    tx_->cv.wait(lock, [&] { return tx_->frames.size() < tx_->capacity || tx_->closed; });
    if (tx_->closed)
        throw TransportClosed("send on closed channel");
    bytes_sent_ += bytes.size();
    tx_->frames.push_back(std::move(bytes));
    tx_->cv.notify_all();
}

Frame Endpoint::recv() {
    std::vector<std::uint8_t> bytes;
    {
        std::unique_lock<std::mutex> lock(rx_->mu);
        rx_->cv.wait(lock, [&] { return !rx_->frames.empty() || rx_->closed; });
        if (rx_->frames.empty())
            throw TransportClosed("channel closed");
        bytes = std::move(rx_->frames.front());
        rx_->frames.pop_front();
        rx_->cv.notify_all();
    }
    bytes_received_ += bytes.size();
    return decode_frame(bytes);
}

bool Endpoint::pending() const {
    std::unique_lock<std::mutex> lock(rx_->mu);
    return !rx_->frames.empty();
}

void Endpoint::close() {
    for (auto& q : {tx_, rx_}) {
        std::unique_lock<std::mutex> lock(q->mu);
        q->closed = true;
        q->cv.notify_all();
    }
}

std::pair<std::shared_ptr<Endpoint>, std::shared_ptr<Endpoint>>
make_channel(std::size_t capacity) {
    auto a2b = std::make_shared<Endpoint::Queue>();
    auto b2a = std::make_shared<Endpoint::Queue>();
    a2b->capacity = b2a->capacity = capacity == 0 ? 1 : capacity;
    auto a = std::make_shared<Endpoint>();
    auto b = std::make_shared<Endpoint>();
    a->tx_ = a2b;
    a->rx_ = b2a;
    b->tx_ = b2a;
    b->rx_ = a2b;
    return {a, b};
}

} // namespace bitsync
