#pragma once

#include "bitsync/bitseq.hpp"
#include "bitsync/burst.hpp"
#include "bitsync/hashing.hpp"
#include "bitsync/transport.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bitsync {

/// Interactive synchronization parameters. Zero m_a/m_h means "derive the
/// default 2*ceil(log2 n) at run time".
struct SyncParams {
    std::size_t m_a = 0;
    std::size_t m_h = 0;
    HashSpec hash;                    // m_h is overridden by the field above
    double window_scale = 2.0;        // kappa_w >= 1 (rule 1)
    double small_piece_factor = 2.0;  // L > 1 (rule 4 threshold L*(m_a+m_h))
    double abort_fraction = 0.5;      // alpha in (0,1) (rule 5)
    std::size_t burst_threshold = 50; // B0
    std::size_t burst_rounds = 2;     // T_burst
    bool burst_mode = false;
    std::size_t max_rounds = 1 << 20; // hard safety cap

    /// When set, hash comparisons are replaced by ground-truth equality
    /// against this full X; costs are still charged as if real digests were
    /// compared. Validation hook for co-located parties.
    const BitSeq* reference = nullptr;
};

// Fills defaulted fields from n and validates; throws ParamOutOfRange.
SyncParams resolve_params(SyncParams params, std::size_t n);

enum class Outcome { synced, synced_within_d0, fallback_full_transfer, failed };

std::string to_string(Outcome outcome);

struct SyncStats {
    std::uint64_t rounds = 0;
    std::uint64_t bits_e2d = 0, bits_d2e = 0;
    std::uint64_t wire_bytes_e2d = 0, wire_bytes_d2e = 0;
    std::uint64_t anchors_sent = 0, hashes_sent = 0, syndromes_sent = 0;
    std::uint64_t pieces_sent_full = 0, burst_invocations = 0;
    // decomposition of bits_e2d by payload category
    std::uint64_t anchor_bits = 0, hash_bits = 0, syndrome_bits = 0;
    std::uint64_t full_piece_bits = 0, burst_bits = 0, abort_bits = 0;
    Outcome outcome = Outcome::failed;
};

/// What a segment's next encoder transmission is (mirrored by the decoder).
enum class SegMode : std::uint8_t {
    anchor,    // next anchor set (or the full piece under rule 4 / exhaustion)
    verify,    // hash
    vt,        // VT syndrome + hash
    full,      // piece verbatim
    burst_syn, // plane-1/plane-B VT syndromes
    burst_win, // window bits + verification hash
};

/// Unresolved substring. Both parties keep their lists in identical
/// left-to-right order, so segments are addressed implicitly by position.
struct Segment {
    std::size_t x_start = 0, x_len = 0;
    std::size_t y_start = 0, y_len = 0; // decoder side only
    std::size_t anchor_sets_sent = 0;
    SegMode mode = SegMode::anchor;

    // burst guess-and-check bookkeeping
    std::size_t burst_len = 0;
    bool burst_is_delete = false;
    bool tried_burst = false;
    std::int64_t streak_net = 0; // offset the streak was built on
    std::size_t streak = 0;      // consecutive anchor rounds at that offset
    BitSeq burst_reply;          // encoder: stored run reply
    std::shared_ptr<BurstDecodeState> burst_state; // decoder: step-2 state

    std::int64_t net_offset() const {
        return static_cast<std::int64_t>(x_len) - static_cast<std::int64_t>(y_len);
    }
};

// 0-based start of anchor set `index` inside a segment of length l: set 0 is
// centered, later sets tile outward alternating right-then-left, skipping
// placements that fall outside the segment. nullopt once exhausted.
std::optional<std::size_t> anchor_set_start(std::size_t l, std::size_t m_a,
                                            std::size_t index);

// Nearest-center anchor match: scans placements by increasing distance from
// the central placement (ties leftward), gives up past window_scale*sqrt(l).
std::optional<std::size_t> align_anchor(const BitSeq& hay, const BitSeq& anchor,
                                        double window_scale);

/// Algorithm-1 state machine. Drive with start() then on_reply() until done.
class Encoder {
  public:
    Encoder(const BitSeq& x, std::size_t y_len, const SyncParams& params);

    Frame start();
    std::optional<Frame> on_reply(const Frame& reply);
    bool done() const { return segments_.empty(); }
    bool aborted() const { return aborted_; }
    const SyncStats& stats() const { return stats_; }

  private:
    void emit_segment(Segment seg, std::vector<Message>& out, std::vector<Segment>& live,
                      SyncStats& delta);
    Frame finalize(std::vector<Message> messages, std::vector<Segment> live,
                   SyncStats delta);

    const BitSeq& x_;
    SyncParams params_;
    std::vector<Segment> segments_;
    std::uint64_t round_ = 0;
    bool aborted_ = false;
    SyncStats stats_;
};

/// Algorithm-2 state machine. Feed encoder frames until done().
class Decoder {
  public:
    Decoder(const BitSeq& y, std::size_t n, const SyncParams& params);

    // Reply frame, or nullopt when nothing remains to send.
    std::optional<Frame> on_payload(const Frame& frame);
    bool done() const { return done_; }
    const SyncStats& stats() const { return stats_; }

    // Assembles the reconstruction; sets stats().outcome.
    BitSeq result();

  private:
    bool piece_accepted(const BitSeq& their_digest_bits, const BitSeq& candidate,
                        std::size_t x_start, std::size_t x_len) const;
    void resolve(std::size_t x_start, BitSeq bits);

    const BitSeq& y_;
    std::size_t n_;
    SyncParams params_;
    std::vector<Segment> segments_;
    std::vector<std::pair<std::size_t, BitSeq>> resolved_;
    bool done_ = false;
    bool abort_seen_ = false;
    SyncStats stats_;
};

struct SyncResult {
    BitSeq reconstructed;
    SyncStats stats;
};

// Runs both parties in-process over a byte-counted channel.
SyncResult run_sync(const BitSeq& x, const BitSeq& y, const SyncParams& params);

} // namespace bitsync
