#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bitsync {

struct Run {
    std::size_t start;
    std::size_t length;
    bool bit;

    bool operator==(const Run&) const = default;
};

// Maximal alternating blocks tiling [0, n).
using RunIndex = std::vector<Run>;

/// Packed bit string. Bit i lives in word i/64 at bit i%64; unused tail bits
/// of the last word are kept zero so whole-word comparison is valid.
class BitSeq {
  public:
    BitSeq() = default;
    explicit BitSeq(std::size_t n) : size_(n), words_(word_count(n), 0) {}

    static BitSeq random(std::size_t n, std::uint64_t seed);
    static BitSeq parse(std::string_view text); // '0'/'1', whitespace ignored
    // MSB-first byte unpacking: bit 7 of bytes[0] is bit 0 of the sequence.
    static BitSeq from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set_bit(std::size_t i, bool v) {
        std::uint64_t m = 1ull << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    void push_back(bool v);
    void append(const BitSeq& other);

    BitSeq slice(std::size_t start, std::size_t len) const;

    // Up to 64 bits starting at pos, bit j of the result = bit(pos + j).
    std::uint64_t window(std::size_t pos, std::size_t len) const;

    std::size_t weight() const;

    // Weighted checksum sum_{i=1..n} i * x_i (1-based index).
    std::uint64_t checksum() const;

    RunIndex runs() const;
    std::size_t run_count() const;

    std::size_t hamming(const BitSeq& other) const;

    std::string to_string() const;
    std::vector<std::uint8_t> to_bytes() const; // MSB-first, zero padded

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitSeq&) const = default;

  private:
    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }
    void clear_tail();

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

BitSeq concat(const BitSeq& a, const BitSeq& b);

// File helpers (raw MSB-first bytes, or text mode with '0'/'1'/newline).
BitSeq read_bits_file(const std::string& path, bool text_mode);
void write_bits_file(const std::string& path, const BitSeq& bits, bool text_mode);

} // namespace bitsync
