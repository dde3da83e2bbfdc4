#pragma once

#include "bitsync/bitseq.hpp"
#include "bitsync/hashing.hpp"
#include "bitsync/protocol.hpp"

#include <cstddef>

namespace bitsync {

/// Fixed partition of X into equal pieces (the last one may be short).
/// Zero m_a/m_h means "derive the default 2*ceil(log2 n) at run time".
struct PiecePlan {
    std::size_t piece_len = 0;
    std::size_t m_a = 0;
    std::size_t m_h = 0;
    HashSpec hash;             // m_h is overridden by the field above
    double window_scale = 2.0; // anchor search radius: window_scale*sqrt(piece_len)

    /// Ground-truth equality hook, same contract as SyncParams::reference.
    const BitSeq* reference = nullptr;
};

enum class PieceClass { verify, vt, unresolved };

// Length-offset triage of an aligned piece: equal lengths are checked by
// hash alone, off-by-one lengths go through a VT decode, anything else is
// declared unsynchronized and later shipped verbatim.
PieceClass classify_piece(std::size_t y_piece_len, std::size_t x_piece_len);

// One complete round: per-piece anchor + hash + VT syndrome out, a
// piece_count-bit status bitmap back, then the unresolved pieces in full.
// Exactly three frames cross the channel. bits_d2e equals the piece count
// deterministically.
SyncResult run_single_round(const BitSeq& x, const BitSeq& y, const PiecePlan& plan);

} // namespace bitsync
