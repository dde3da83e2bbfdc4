#pragma once

#include "bitsync/bitseq.hpp"

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace bitsync {

enum class Tag : std::uint8_t {
    Anchor = 1,
    Hash = 2,
    VtSyndrome = 3,
    FullPiece = 4,
    Instruction = 5,
    BurstSyndromes = 6,
    BurstRunReply = 7,
    BurstWindowBits = 8,
    Abort = 9,
};

/// One tagged protocol datum. cost_bits always equals payload.size(); the
/// payload width is chosen by the sender per the accounting table.
struct Message {
    Tag tag = Tag::Hash;
    std::uint64_t segment_id = 0;
    BitSeq payload;
    std::uint64_t cost_bits = 0;

    bool operator==(const Message&) const = default;
};

Message make_message(Tag tag, std::uint64_t segment_id, BitSeq payload);

struct Frame {
    std::uint64_t round = 0;
    std::vector<Message> messages;

    bool operator==(const Frame&) const = default;
};

// Self-delimiting frame: 4-byte big-endian body length, then body (1-byte
// version, varint round, varint message count, messages), then CRC32 of the
// body. Message = 1-byte tag, varint segment id, varint payload bit length,
// payload packed MSB-first and zero-padded to a byte boundary.
std::vector<std::uint8_t> encode_frame(const Frame& frame);
Frame decode_frame(std::span<const std::uint8_t> bytes);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

// Fixed-width big-endian helpers for packing integers into payloads.
BitSeq pack_uint(std::uint64_t value, std::size_t width);
std::uint64_t unpack_uint(const BitSeq& bits, std::size_t offset, std::size_t width);

/// One side of an in-process duplex channel. Frames pass through the byte
/// codec so wire byte counts are faithful.
class Endpoint {
  public:
    void send(const Frame& frame);
    Frame recv(); // blocks; throws TransportClosed when drained and peer closed
    bool pending() const;
    void close();

    std::uint64_t bytes_sent() const { return bytes_sent_; }
    std::uint64_t bytes_received() const { return bytes_received_; }

  private:
    friend std::pair<std::shared_ptr<Endpoint>, std::shared_ptr<Endpoint>>
    make_channel(std::size_t);

    struct Queue {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<std::vector<std::uint8_t>> frames;
        std::size_t capacity = 0;
        bool closed = false;
    };

    std::shared_ptr<Queue> tx_, rx_;
    std::uint64_t bytes_sent_ = 0;
    std::uint64_t bytes_received_ = 0;
};

// Two connected endpoints; ordered lossless delivery in both directions.
std::pair<std::shared_ptr<Endpoint>, std::shared_ptr<Endpoint>>
make_channel(std::size_t capacity = 1024);

} // namespace bitsync
