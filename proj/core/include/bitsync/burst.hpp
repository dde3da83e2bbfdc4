#pragma once

#include "bitsync/bitseq.hpp"
#include "bitsync/transport.hpp"
#include "bitsync/vt.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace bitsync {

// Bits needed for values in [0, maxval].
std::size_t bits_for_max(std::uint64_t maxval);

/// Bit planes: plane k (1-based) holds (x_k, x_{B+k}, x_{2B+k}, ...).
struct PlaneSet {
    std::size_t B = 1;
    std::vector<BitSeq> planes;
};

PlaneSet split_planes(const BitSeq& x, std::size_t B);
BitSeq interleave(const PlaneSet& planes);

// Length of plane k (1-based) of a length-n string split into B planes.
std::size_t plane_length(std::size_t n, std::size_t B, std::size_t k);

struct PlaneRun {
    std::uint64_t j = 0, l = 0; // 1-based run span containing the edit
};

struct BurstWindow {
    std::uint64_t j_star = 0, l_star = 0; // 1-based, inclusive

    bool operator==(const BurstWindow&) const = default;
};

// j* = max(j1-1, jB), l* = min(l1, lB+1); EmptyWindow if j* > l*.
BurstWindow burst_window(PlaneRun run1, PlaneRun runB);

// --- wire-level steps, usable standalone or from the protocol ---

// Payload widths shared by both parties (lx = encoder-side segment length).
std::size_t burst_syndrome_width(std::size_t lx, std::size_t B);
std::size_t burst_reply_width(std::size_t lx, std::size_t B, bool is_delete);

// Step 1: syndromes of planes 1 and B, each packed at burst_syndrome_width.
BitSeq burst_syndromes_payload(const BitSeq& x, std::size_t B);

/// Decoder state carried between step 2 and the final patch.
struct BurstDecodeState {
    PlaneSet y_planes;
    BitSeq x1, xB; // decoded planes 1 and B
    BurstWindow window;
};

// Step 2: decode planes 1 and B against the received syndromes; returns the
// reply payload (run indices for deletions, j*/l* for insertions) and fills
// the state. Throws BurstHypothesisFailed when decoding is impossible.
BitSeq burst_decode_reply(const BitSeq& y, std::size_t lx, std::size_t B, bool is_delete,
                          const BitSeq& syndromes, BurstDecodeState& state);

// Step 3 (encoder): recover the window from the reply and emit the middle
// plane bits, (l*-j*+1) per plane for planes 2..B-1 (zero-padded where a
// plane is short).
BitSeq burst_window_payload(const BitSeq& x, std::size_t B, bool is_delete,
                            const BitSeq& reply, BurstWindow* window_out = nullptr);

// Final step (decoder): patch the middle planes and re-interleave.
BitSeq burst_patch(std::size_t lx, std::size_t B, bool is_delete,
                   const BurstDecodeState& state, const BitSeq& window_bits);

struct BurstStats {
    std::uint64_t bits_e2d = 0;
    std::uint64_t bits_d2e = 0;
    std::uint64_t wire_bytes_e2d = 0;
    std::uint64_t wire_bytes_d2e = 0;
};

// Drives the three-step exchange for a y differing from x by one burst of B
// deletions (or insertions); returns the decoder's reconstruction.
std::pair<BitSeq, BurstStats> run_single_burst(const BitSeq& x, const BitSeq& y,
                                               std::size_t B, bool is_delete);

} // namespace bitsync
