#include "bitsync/bitseq.hpp"

#include "bitsync/errors.hpp"
#include "bitsync/rng.hpp"

#include <bit>
#include <fstream>

namespace bitsync {

void BitSeq::clear_tail() {
    std::size_t tail = size_ & 63;
    if (tail != 0 && !words_.empty())
        words_.back() &= (1ull << tail) - 1;
}

BitSeq BitSeq::random(std::size_t n, std::uint64_t seed) {
    BitSeq out(n);
    SplitMix rng(mix(seed, 0x62697473u)); // domain-separated stream
    for (auto& w : out.words_)
        w = rng.next();
    out.clear_tail();
    return out;
}

BitSeq BitSeq::parse(std::string_view text) {
    BitSeq out;
    for (char c : text) {
        if (c == '0' || c == '1')
            out.push_back(c == '1');
        else if (c == ' ' || c == '\n' || c == '\r' || c == '\t')
            continue;
        else
            throw DomainError("BitSeq::parse: invalid character");
    }
    return out;
}

BitSeq BitSeq::from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
    if (nbits > bytes.size() * 8)
        throw DomainError("from_bytes: not enough bytes");
    BitSeq out(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        bool v = (bytes[i >> 3] >> (7 - (i & 7))) & 1u;
        if (v)
            out.words_[i >> 6] |= 1ull << (i & 63);
    }
    return out;
}

void BitSeq::push_back(bool v) {
    if ((size_ & 63) == 0)
        words_.push_back(0);
    if (v)
        words_[size_ >> 6] |= 1ull << (size_ & 63);
    ++size_;
}

void BitSeq::append(const BitSeq& other) {
    std::size_t shift = size_ & 63;
    std::size_t new_size = size_ + other.size_;
    words_.resize(word_count(new_size), 0);
    if (shift == 0) {
        for (std::size_t k = 0; k < other.words_.size(); ++k)
            words_[(size_ >> 6) + k] = other.words_[k];
    } else {
        std::size_t base = size_ >> 6;
        for (std::size_t k = 0; k < other.words_.size(); ++k) {
            std::uint64_t w = other.words_[k];
            words_[base + k] |= w << shift;
            if (base + k + 1 < words_.size())
                words_[base + k + 1] = w >> (64 - shift);
        }
    }
    size_ = new_size;
    clear_tail();
}

BitSeq BitSeq::slice(std::size_t start, std::size_t len) const {
    if (start + len > size_)
        throw PositionOutOfRange("slice out of range");
    BitSeq out(len);
    std::size_t src_word = start >> 6;
    std::size_t shift = start & 63;
    for (std::size_t k = 0; k < out.words_.size(); ++k) {
        std::uint64_t lo = words_[src_word + k] >> shift;
        std::uint64_t hi = 0;
        if (shift != 0 && src_word + k + 1 < words_.size())
            hi = words_[src_word + k + 1] << (64 - shift);
        out.words_[k] = lo | hi;
    }
    out.clear_tail();
    return out;
}

std::uint64_t BitSeq::window(std::size_t pos, std::size_t len) const {
    if (pos + len > size_ || len > 64)
        throw PositionOutOfRange("window out of range");
    if (len == 0)
        return 0;
    std::size_t word = pos >> 6;
    std::size_t shift = pos & 63;
    std::uint64_t v = words_[word] >> shift;
    if (shift != 0 && word + 1 < words_.size())
        v |= words_[word + 1] << (64 - shift);
    if (len < 64)
        v &= (1ull << len) - 1;
    return v;
}

std::size_t BitSeq::weight() const {
    std::size_t w = 0;
    for (std::uint64_t x : words_)
        w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

std::uint64_t BitSeq::checksum() const {
    // Per word at bit base b: sum of (b + j + 1) over set in-word positions j.
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::uint64_t w = words_[k];
        if (w == 0)
            continue;
        std::uint64_t base = (static_cast<std::uint64_t>(k) << 6) + 1;
        total += base * static_cast<std::uint64_t>(std::popcount(w));
        while (w != 0) {
            total += static_cast<std::uint64_t>(std::countr_zero(w));
            w &= w - 1;
        }
    }
    return total;
}

RunIndex BitSeq::runs() const {
    RunIndex out;
    if (size_ == 0)
        return out;
    bool cur = bit(0);
    std::size_t start = 0;
    for (std::size_t i = 1; i < size_; ++i) {
        if (bit(i) != cur) {
            out.push_back({start, i - start, cur});
            start = i;
            cur = bit(i);
        }
    }
    out.push_back({start, size_ - start, cur});
    return out;
}

std::size_t BitSeq::run_count() const {
    if (size_ == 0)
        return 0;
    // Transitions between adjacent bits: popcount of x XOR (x >> 1).
    std::size_t transitions = 0;
    std::size_t pairs = size_ - 1;
    for (std::size_t k = 0; (k << 6) < pairs; ++k) {
        std::uint64_t w = words_[k];
        std::uint64_t shifted = w >> 1;
        if (k + 1 < words_.size())
            shifted |= words_[k + 1] << 63;
        std::uint64_t diff = w ^ shifted;
        std::size_t remaining = pairs - (k << 6);
        if (remaining < 64)
            diff &= (1ull << remaining) - 1;
        transitions += static_cast<std::size_t>(std::popcount(diff));
    }
    return transitions + 1;
}

std::size_t BitSeq::hamming(const BitSeq& other) const {
    if (size_ != other.size_)
        throw DomainError("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
        d += static_cast<std::size_t>(std::popcount(words_[k] ^ other.words_[k]));
    return d;
}

std::string BitSeq::to_string() const {
    std::string s;
    s.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i)
        s.push_back(bit(i) ? '1' : '0');
    return s;
}

std::vector<std::uint8_t> BitSeq::to_bytes() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i)
        if (bit(i))
            out[i >> 3] |= static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    return out;
}

BitSeq concat(const BitSeq& a, const BitSeq& b) {
    BitSeq out = a;
    out.append(b);
    return out;
}

BitSeq read_bits_file(const std::string& path, bool text_mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text_mode)
        return BitSeq::parse(data);
    return BitSeq::from_bytes(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()),
                                      data.size()),
        data.size() * 8);
}

void write_bits_file(const std::string& path, const BitSeq& bits, bool text_mode) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    if (text_mode) {
        out << bits.to_string() << '\n';
    } else {
        auto bytes = bits.to_bytes();
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
}

} // namespace bitsync
