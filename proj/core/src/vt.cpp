#include "bitsync/vt.hpp"

#include "bitsync/errors.hpp"

#include <bit>

namespace bitsync {

VtSyndrome vt_syndrome(const BitSeq& x) {
    std::uint64_t m = x.size() + 1;
    return {x.checksum() % m, m};
}

namespace {

// 0-based position of the k-th set bit counting from the right (k >= 1).
std::size_t select_one_from_right(const BitSeq& y, std::size_t k) {
    const auto& words = y.words();
    for (std::size_t idx = words.size(); idx-- > 0;) {
        std::uint64_t w = words[idx];
        std::size_t pc = static_cast<std::size_t>(std::popcount(w));
        if (pc < k) {
            k -= pc;
            continue;
        }
        // k-th set bit from the top of this word.
        for (std::size_t j = 64; j-- > 0;) {
            if ((w >> j) & 1u) {
                if (--k == 0)
                    return (idx << 6) + j;
            }
        }
    }
    throw NoCodeword("select: not enough ones");
}

// 0-based position of the k-th zero bit counting from the left (k >= 1).
std::size_t select_zero_from_left(const BitSeq& y, std::size_t k) {
    const auto& words = y.words();
    for (std::size_t idx = 0; idx < words.size(); ++idx) {
        std::size_t valid = std::min<std::size_t>(64, y.size() - (idx << 6));
        std::uint64_t inv = ~words[idx];
        if (valid < 64)
            inv &= (1ull << valid) - 1;
        std::size_t pc = static_cast<std::size_t>(std::popcount(inv));
        if (pc < k) {
            k -= pc;
            continue;
        }
        while (inv != 0) {
            std::size_t j = static_cast<std::size_t>(std::countr_zero(inv));
            if (--k == 0)
                return (idx << 6) + j;
            inv &= inv - 1;
        }
    }
    throw NoCodeword("select: not enough zeros");
}

// 0-based position of the last zero bit, or npos when y is all ones.
std::size_t last_zero(const BitSeq& y) {
    const auto& words = y.words();
    for (std::size_t idx = words.size(); idx-- > 0;) {
        std::size_t valid = std::min<std::size_t>(64, y.size() - (idx << 6));
        std::uint64_t inv = ~words[idx];
        if (valid < 64)
            inv &= (1ull << valid) - 1;
        if (inv != 0)
            return (idx << 6) + (63 - static_cast<std::size_t>(std::countl_zero(inv)));
    }
    return static_cast<std::size_t>(-1);
}

BitSeq insert_bit(const BitSeq& y, std::size_t pos, bool b) {
    BitSeq out = y.slice(0, pos);
    out.push_back(b);
    out.append(y.slice(pos, y.size() - pos));
    return out;
}

BitSeq remove_bit(const BitSeq& y, std::size_t pos) {
    return concat(y.slice(0, pos), y.slice(pos + 1, y.size() - pos - 1));
}

} // namespace

VtDecodeResult decode_deletion_at(const BitSeq& y, std::size_t n, const VtSyndrome& s) {
    if (n == 0 || y.size() != n - 1)
        throw NoCodeword("decode_deletion: length mismatch");
    std::uint64_t m = n + 1;
    if (s.modulus != m)
        throw NoCodeword("decode_deletion: modulus mismatch");
    std::uint64_t d = (s.a % m + m - y.checksum() % m) % m;
    std::size_t wt = y.weight();

    if (d == 0) {
        // Deleted trailing 0.
        BitSeq x = y;
        x.push_back(false);
        return {std::move(x), n - 1};
    }
    if (d <= wt) {
        // Deleted 0: restore it just left of the rightmost d ones.
        std::size_t p = select_one_from_right(y, static_cast<std::size_t>(d));
        return {insert_bit(y, p, false), p};
    }
    // Deleted 1: restore it just right of the leftmost d - wt - 1 zeros.
    std::size_t l0 = static_cast<std::size_t>(d) - wt - 1;
    std::size_t zeros = y.size() - wt;
    if (l0 > zeros)
        throw NoCodeword("decode_deletion: no consistent codeword");
    std::size_t p = l0 == 0 ? 0 : select_zero_from_left(y, l0) + 1;
    return {insert_bit(y, p, true), p};
}

BitSeq decode_deletion(const BitSeq& y, std::size_t n, const VtSyndrome& s) {
    return decode_deletion_at(y, n, s).x;
}

VtDecodeResult decode_insertion_at(const BitSeq& y, std::size_t n, const VtSyndrome& s) {
    if (y.size() != n + 1)
        throw NoCodeword("decode_insertion: length mismatch");
    std::uint64_t m = n + 1;
    if (s.modulus != m)
        throw NoCodeword("decode_insertion: modulus mismatch");
    if (n == 0)
        return {BitSeq{}, 0};

    std::uint64_t em = (y.checksum() % m + m - s.a % m) % m;
    std::size_t wt = y.weight();
    std::size_t zeros = y.size() - wt;

    // Inserted 0 with exactly em ones to its right (excess = em).
    if (em <= wt) {
        if (em == 0) {
            if (!y.bit(y.size() - 1)) {
                std::size_t p = y.size() - 1;
                return {remove_bit(y, p), p};
            }
        } else {
            std::size_t q = select_one_from_right(y, static_cast<std::size_t>(em));
            if (q > 0 && !y.bit(q - 1))
                return {remove_bit(y, q - 1), q - 1};
        }
    }
    // Inserted 1 with exactly em - wt zeros to its left (excess = em).
    if (em >= wt && em - wt <= zeros) {
        std::size_t l0 = static_cast<std::size_t>(em) - wt;
        std::size_t p = l0 == 0 ? 0 : select_zero_from_left(y, l0) + 1;
        if (p < y.size() && y.bit(p))
            return {remove_bit(y, p), p};
    }
    // em == 0 also covers excess = n + 1: a 1 inserted after every zero.
    if (em == 0 && y.bit(y.size() - 1)) {
        std::size_t z = last_zero(y);
        std::size_t p = z == static_cast<std::size_t>(-1) ? 0 : z + 1;
        if (y.bit(p))
            return {remove_bit(y, p), p};
    }
    throw NoCodeword("decode_insertion: no consistent codeword");
}

BitSeq decode_insertion(const BitSeq& y, std::size_t n, const VtSyndrome& s) {
    return decode_insertion_at(y, n, s).x;
}

} // namespace bitsync
