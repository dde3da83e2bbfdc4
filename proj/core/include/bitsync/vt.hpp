#pragma once

#include "bitsync/bitseq.hpp"

#include <cstdint>

namespace bitsync {

/// VT syndrome: residue of the weighted checksum mod (n+1), n = pre-edit length.
struct VtSyndrome {
    std::uint64_t a = 0;
    std::uint64_t modulus = 1;

    bool operator==(const VtSyndrome&) const = default;
};

VtSyndrome vt_syndrome(const BitSeq& x);

/// Decode result plus the canonical 0-based position of the edited bit in the
/// longer of the two strings (for deletion decode: position of the restored
/// bit in x; for insertion decode: position of the removed bit in y).
struct VtDecodeResult {
    BitSeq x;
    std::size_t pos = 0;
};

// y has length n-1; recovers the unique x in VT_a(n) that yields y by one
// deletion. Throws NoCodeword if none exists.
VtDecodeResult decode_deletion_at(const BitSeq& y, std::size_t n, const VtSyndrome& s);
BitSeq decode_deletion(const BitSeq& y, std::size_t n, const VtSyndrome& s);

// y has length n+1; recovers the unique x in VT_a(n) that yields y by one
// insertion. Throws NoCodeword if none exists.
VtDecodeResult decode_insertion_at(const BitSeq& y, std::size_t n, const VtSyndrome& s);
BitSeq decode_insertion(const BitSeq& y, std::size_t n, const VtSyndrome& s);

} // namespace bitsync
