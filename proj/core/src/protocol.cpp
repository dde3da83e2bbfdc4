#include "bitsync/protocol.hpp"

#include "bitsync/errors.hpp"
#include "bitsync/vt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

namespace bitsync {

namespace {

// 4-bit anchor-response codes (1 + 3x3 split options, plus control codes).
constexpr std::uint64_t kRetry = 0;     // anchor could not be aligned
constexpr std::uint64_t kBurstReq = 10; // invoke the burst subprotocol
constexpr std::uint64_t kSendFull = 11; // piece is unalignable; send verbatim

// Per-piece classes carried inside a split code.
constexpr std::uint64_t kClsVerify = 0;
constexpr std::uint64_t kClsVt = 1;
constexpr std::uint64_t kClsAnchor = 2;

std::uint64_t split_code(std::uint64_t left, std::uint64_t right) {
    return 1 + 3 * left + right;
}

SegMode mode_for_class(std::uint64_t cls) {
    switch (cls) {
    case kClsVerify:
        return SegMode::verify;
    case kClsVt:
        return SegMode::vt;
    case kClsAnchor:
        return SegMode::anchor;
    default:
        throw ProtocolViolation("bad piece class");
    }
}

std::uint64_t class_for_segment(const Segment& seg) {
    std::int64_t net = seg.net_offset();
    if (net == 0)
        return kClsVerify;
    if (net == 1 || net == -1)
        return kClsVt;
    return kClsAnchor;
}

std::size_t rule4_threshold(const SyncParams& p) {
    return static_cast<std::size_t>(
        std::ceil(p.small_piece_factor * static_cast<double>(p.m_a + p.m_h)));
}

// Deterministic on both sides: an anchor-mode segment is sent verbatim when
// it is below the rule-4 threshold or its anchor placements are exhausted.
bool anchor_becomes_full(const Segment& seg, const SyncParams& p) {
    if (seg.x_len < rule4_threshold(p))
        return true;
    return !anchor_set_start(seg.x_len, p.m_a, seg.anchor_sets_sent).has_value();
}

bool sent_as_full(const Segment& seg, const SyncParams& p) {
    if (seg.mode == SegMode::full)
        return true;
    // A distance sketch over fewer than m_h bits says nothing (and its
    // sampling density would exceed 1); such pieces go verbatim instead.
    if (p.hash.mode == HashMode::distance_sketch && seg.x_len < p.m_h &&
        seg.mode != SegMode::burst_syn && seg.mode != SegMode::burst_win)
        return true;
    return seg.mode == SegMode::anchor && anchor_becomes_full(seg, p);
}

bool match_at(const BitSeq& hay, std::size_t pos, const BitSeq& anchor) {
    std::size_t m = anchor.size();
    for (std::size_t j = 0; j < m; j += 64) {
        std::size_t chunk = std::min<std::size_t>(64, m - j);
        if (hay.window(pos + j, chunk) != anchor.window(j, chunk))
            return false;
    }
    return true;
}

// Nearest match to `expected` within [region_start, region_start+region_len)
// of hay, ties to the left, giving up past `radius`. Returns the position
// relative to region_start.
std::optional<std::size_t> align_near(const BitSeq& hay, std::size_t region_start,
                                      std::size_t region_len, const BitSeq& anchor,
                                      std::int64_t expected, double radius) {
    std::int64_t m = static_cast<std::int64_t>(anchor.size());
    if (m == 0 || static_cast<std::int64_t>(region_len) < m)
        return std::nullopt;
    std::int64_t max_q = static_cast<std::int64_t>(region_len) - m;
    auto try_at = [&](std::int64_t q) {
        return q >= 0 && q <= max_q &&
               match_at(hay, region_start + static_cast<std::size_t>(q), anchor);
    };
    std::int64_t limit = static_cast<std::int64_t>(std::floor(radius));
    if (try_at(expected))
        return static_cast<std::size_t>(expected);
    for (std::int64_t d = 1; d <= limit; ++d) {
        if (try_at(expected - d))
            return static_cast<std::size_t>(expected - d);
        if (try_at(expected + d))
            return static_cast<std::size_t>(expected + d);
    }
    return std::nullopt;
}

const Message& take(const Frame& frame, std::size_t& cursor, Tag expected) {
    if (cursor >= frame.messages.size())
        throw ProtocolViolation("frame ended before all segments were served");
    const Message& m = frame.messages[cursor++];
    if (m.tag != expected)
        throw ProtocolViolation("unexpected message tag");
    return m;
}

std::size_t ceil_log2(std::size_t n) {
    if (n <= 1)
        return 1;
    return std::bit_width(n - 1);
}

} // namespace

SyncParams resolve_params(SyncParams params, std::size_t n) {
    std::size_t def = 2 * ceil_log2(std::max<std::size_t>(n, 2));
    if (params.m_a == 0)
        params.m_a = def;
    if (params.m_h == 0)
        params.m_h = def;
    params.hash.m_h = params.m_h;
    if (params.m_a < 1 || params.m_h < 1)
        throw ParamOutOfRange("m_a and m_h must be >= 1");
    if (params.window_scale < 1.0)
        throw ParamOutOfRange("window_scale must be >= 1");
    if (params.small_piece_factor <= 1.0)
        throw ParamOutOfRange("small_piece_factor must be > 1");
    if (params.abort_fraction <= 0.0 || params.abort_fraction >= 1.0)
        throw ParamOutOfRange("abort_fraction must lie in (0,1)");
    if (params.burst_rounds < 1)
        throw ParamOutOfRange("burst_rounds must be >= 1");
    return params;
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::synced:
        return "synced";
    case Outcome::synced_within_d0:
        return "synced_within_d0";
    case Outcome::fallback_full_transfer:
        return "fallback_full_transfer";
    case Outcome::failed:
        return "failed";
    }
    return "failed";
}

std::optional<std::size_t> anchor_set_start(std::size_t l, std::size_t m_a,
                                            std::size_t index) {
    if (m_a == 0 || m_a > l)
        return std::nullopt;
    std::size_t s0 = (l - m_a) / 2;
    if (index == 0)
        return s0;
    std::size_t seen = 1;
    for (std::size_t k = 1;; ++k) {
        std::size_t right = s0 + k * m_a;
        bool right_ok = right + m_a <= l;
        bool left_ok = s0 >= k * m_a;
        if (!right_ok && !left_ok)
            return std::nullopt;
        if (right_ok && seen++ == index)
            return right;
        if (left_ok && seen++ == index)
            return s0 - k * m_a;
    }
}

std::optional<std::size_t> align_anchor(const BitSeq& hay, const BitSeq& anchor,
                                        double window_scale) {
    if (anchor.size() > hay.size())
        return std::nullopt;
    std::int64_t expected =
        static_cast<std::int64_t>((hay.size() - anchor.size()) / 2);
    return align_near(hay, 0, hay.size(), anchor, expected,
                      window_scale * std::sqrt(static_cast<double>(hay.size())));
}

// ---------------------------------------------------------------- Encoder

namespace {

SegMode initial_mode(std::size_t n, std::size_t y_len) {
    if (y_len == n)
        return SegMode::verify;
    if (y_len + 1 == n || y_len == n + 1)
        return SegMode::vt;
    return SegMode::anchor;
}

} // namespace

Encoder::Encoder(const BitSeq& x, std::size_t y_len, const SyncParams& params)
    : x_(x), params_(resolve_params(params, x.size())) {
    Segment root;
    root.x_start = 0;
    root.x_len = x.size();
    root.mode = initial_mode(x.size(), y_len);
    segments_.push_back(std::move(root));
}

void Encoder::emit_segment(Segment seg, std::vector<Message>& out,
                           std::vector<Segment>& live, SyncStats& delta) {
    std::uint64_t id = live.size();
    BitSeq piece = x_.slice(seg.x_start, seg.x_len);
    HashContext ctx{seg.x_start, seg.x_len};
    auto push_hash = [&] {
        out.push_back(make_message(Tag::Hash, id, digest(piece, params_.hash, ctx).bits));
        delta.hashes_sent += 1;
        delta.hash_bits += params_.m_h;
    };
    if (sent_as_full(seg, params_)) {
        out.push_back(make_message(Tag::FullPiece, id, piece));
        delta.pieces_sent_full += 1;
        delta.full_piece_bits += seg.x_len;
        return; // resolved; not kept
    }
    switch (seg.mode) {
    case SegMode::full:
    case SegMode::anchor:
        {
            std::size_t s =
                *anchor_set_start(seg.x_len, params_.m_a, seg.anchor_sets_sent);
            out.push_back(
                make_message(Tag::Anchor, id, x_.slice(seg.x_start + s, params_.m_a)));
            seg.anchor_sets_sent += 1;
            delta.anchors_sent += 1;
            delta.anchor_bits += params_.m_a;
        }
        break;
    case SegMode::verify:
        push_hash();
        break;
    case SegMode::vt: {
        VtSyndrome s = vt_syndrome(piece);
        std::size_t width = bits_for_max(seg.x_len);
        out.push_back(make_message(Tag::VtSyndrome, id, pack_uint(s.a, width)));
        delta.syndromes_sent += 1;
        delta.syndrome_bits += width;
        push_hash();
        break;
    }
    case SegMode::burst_syn: {
        BitSeq payload = burst_syndromes_payload(piece, seg.burst_len);
        delta.burst_bits += payload.size();
        out.push_back(make_message(Tag::BurstSyndromes, id, std::move(payload)));
        break;
    }
    case SegMode::burst_win: {
        // A wrong hypothesis can make the decoder's run reply inconsistent
        // with the encoder's planes; revert to anchor splitting in that case
        // (the decoder mirrors the decision off the message tag).
        BitSeq payload;
        try {
            payload = burst_window_payload(piece, seg.burst_len, seg.burst_is_delete,
                                           seg.burst_reply);
        } catch (const Error&) {
            seg.mode = SegMode::anchor;
            seg.burst_reply = BitSeq();
            emit_segment(std::move(seg), out, live, delta);
            return;
        }
        delta.burst_bits += payload.size();
        out.push_back(make_message(Tag::BurstWindowBits, id, std::move(payload)));
        push_hash();
        break;
    }
    }
    live.push_back(std::move(seg));
}

Frame Encoder::finalize(std::vector<Message> messages, std::vector<Segment> live,
                        SyncStats delta) {
    std::uint64_t cost = 0;
    for (const Message& m : messages)
        cost += m.cost_bits;
    double budget = params_.abort_fraction * static_cast<double>(x_.size());
    bool lone_full_transfer = messages.size() == 1 &&
                              messages.front().tag == Tag::FullPiece &&
                              messages.front().payload.size() == x_.size();
    if (!lone_full_transfer && static_cast<double>(stats_.bits_e2d) > budget) {
        // rule 5: give up on interaction and ship X itself
        messages.clear();
        messages.push_back(make_message(Tag::Abort, 0, x_));
        stats_.bits_e2d += x_.size();
        stats_.abort_bits += x_.size();
        segments_.clear();
        aborted_ = true;
    } else {
        stats_.bits_e2d += cost;
        stats_.anchors_sent += delta.anchors_sent;
        stats_.hashes_sent += delta.hashes_sent;
        stats_.syndromes_sent += delta.syndromes_sent;
        stats_.pieces_sent_full += delta.pieces_sent_full;
        stats_.anchor_bits += delta.anchor_bits;
        stats_.hash_bits += delta.hash_bits;
        stats_.syndrome_bits += delta.syndrome_bits;
        stats_.full_piece_bits += delta.full_piece_bits;
        stats_.burst_bits += delta.burst_bits;
        segments_ = std::move(live);
    }
    round_ += 1;
    stats_.rounds = round_;
    return Frame{round_, std::move(messages)};
}

Frame Encoder::start() {
    std::vector<Message> out;
    std::vector<Segment> live;
    SyncStats delta;
    for (Segment& seg : segments_)
        emit_segment(std::move(seg), out, live, delta);
    return finalize(std::move(out), std::move(live), delta);
}

std::optional<Frame> Encoder::on_reply(const Frame& reply) {
    if (reply.messages.size() != segments_.size())
        throw ProtocolViolation("reply count does not match unresolved segments");
    std::vector<Segment> next;
    next.reserve(segments_.size() + 8);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        Segment& seg = segments_[i];
        const Message& msg = reply.messages[i];
        if (msg.tag == Tag::BurstRunReply) {
            if (seg.mode != SegMode::burst_syn)
                throw ProtocolViolation("run reply for a non-burst segment");
            seg.mode = SegMode::burst_win;
            seg.burst_reply = msg.payload;
            next.push_back(std::move(seg));
            continue;
        }
        if (msg.tag != Tag::Instruction)
            throw ProtocolViolation("decoder sent a non-instruction message");
        if (seg.mode == SegMode::verify || seg.mode == SegMode::vt ||
            seg.mode == SegMode::burst_win) {
            if (msg.payload.size() != 1)
                throw ProtocolViolation("hash response must be one bit");
            if (msg.payload.bit(0))
                continue; // matched
            seg.mode = SegMode::anchor;
            next.push_back(std::move(seg));
            continue;
        }
        // anchor (or failed-burst) response: 4-bit code
        std::uint64_t code = unpack_uint(msg.payload, 0, 4);
        if (seg.mode == SegMode::burst_syn) {
            if (code != kRetry)
                throw ProtocolViolation("unexpected burst-stage instruction");
            seg.mode = SegMode::anchor;
            next.push_back(std::move(seg));
            continue;
        }
        if (seg.mode != SegMode::anchor)
            throw ProtocolViolation("instruction for a segment that sent no anchor");
        if (code == kRetry) {
            next.push_back(std::move(seg));
        } else if (code == kSendFull) {
            seg.mode = SegMode::full;
            next.push_back(std::move(seg));
        } else if (code == kBurstReq) {
            std::size_t width = bits_for_max(x_.size());
            seg.burst_len =
                static_cast<std::size_t>(unpack_uint(msg.payload, 4, width));
            seg.burst_is_delete = msg.payload.bit(4 + width);
            if (seg.burst_len == 0 || seg.burst_len >= seg.x_len)
                throw ProtocolViolation("burst hypothesis length out of range");
            seg.mode = SegMode::burst_syn;
            next.push_back(std::move(seg));
        } else if (code >= 1 && code <= 9) {
            std::size_t s =
                *anchor_set_start(seg.x_len, params_.m_a, seg.anchor_sets_sent - 1);
            Segment left, right;
            left.x_start = seg.x_start;
            left.x_len = s;
            left.mode = mode_for_class((code - 1) / 3);
            right.x_start = seg.x_start + s + params_.m_a;
            right.x_len = seg.x_len - s - params_.m_a;
            right.mode = mode_for_class((code - 1) % 3);
            if (left.x_len > 0)
                next.push_back(std::move(left));
            if (right.x_len > 0)
                next.push_back(std::move(right));
        } else {
            throw ProtocolViolation("unknown instruction code");
        }
    }
    segments_ = std::move(next);
    if (segments_.empty())
        return std::nullopt;
    std::vector<Message> out;
    std::vector<Segment> live;
    SyncStats delta;
    for (Segment& seg : segments_)
        emit_segment(std::move(seg), out, live, delta);
    return finalize(std::move(out), std::move(live), delta);
}

// ---------------------------------------------------------------- Decoder

Decoder::Decoder(const BitSeq& y, std::size_t n, const SyncParams& params)
    : y_(y), n_(n), params_(resolve_params(params, n)) {
    Segment root;
    root.x_start = 0;
    root.x_len = n;
    root.y_start = 0;
    root.y_len = y.size();
    root.mode = initial_mode(n, y.size());
    std::int64_t net = root.net_offset();
    if (params_.burst_mode &&
        std::llabs(net) > static_cast<std::int64_t>(params_.burst_threshold)) {
        root.streak = 1;
        root.streak_net = net;
    }
    segments_.push_back(std::move(root));
}

bool Decoder::piece_accepted(const BitSeq& their_digest_bits, const BitSeq& candidate,
                             std::size_t x_start, std::size_t x_len) const {
    if (params_.reference)
        return candidate == params_.reference->slice(x_start, x_len);
    Digest theirs{their_digest_bits, x_len};
    Digest mine = digest(candidate, params_.hash, HashContext{x_start, x_len});
    return accept(theirs, mine, x_len, params_.hash);
}

void Decoder::resolve(std::size_t x_start, BitSeq bits) {
    resolved_.emplace_back(x_start, std::move(bits));
}

std::optional<Frame> Decoder::on_payload(const Frame& frame) {
    stats_.rounds = frame.round;
    if (frame.messages.size() == 1 && frame.messages.front().tag == Tag::Abort) {
        resolved_.clear();
        resolve(0, frame.messages.front().payload);
        segments_.clear();
        abort_seen_ = true;
        done_ = true;
        return std::nullopt;
    }

    std::vector<Segment> next;
    next.reserve(segments_.size() + 8);
    std::vector<Message> replies;
    std::size_t cursor = 0;

    auto reply_bits = [&](BitSeq payload) {
        stats_.bits_d2e += payload.size();
        replies.push_back(
            make_message(Tag::Instruction, next.size(), std::move(payload)));
    };
    auto reply_code = [&](std::uint64_t code) { reply_bits(pack_uint(code, 4)); };
    auto reply_flag = [&](bool matched) {
        BitSeq b(1);
        b.set_bit(0, matched);
        reply_bits(std::move(b));
    };

    for (Segment& seg : segments_) {
        BitSeq y_piece = y_.slice(seg.y_start, seg.y_len);
        if (seg.mode == SegMode::burst_win && cursor < frame.messages.size() &&
            frame.messages[cursor].tag != Tag::BurstWindowBits) {
            // the encoder refuted the burst hypothesis (its planes were
            // inconsistent with the run reply) and fell back to anchor mode
            seg.tried_burst = true;
            seg.streak = 0;
            seg.burst_state.reset();
            seg.mode = SegMode::anchor;
        }
        if (sent_as_full(seg, params_)) {
            const Message& m = take(frame, cursor, Tag::FullPiece);
            if (m.payload.size() != seg.x_len)
                throw ProtocolViolation("full piece length mismatch");
            resolve(seg.x_start, m.payload);
            continue; // no reply expected for a verbatim piece
        }
        switch (seg.mode) {
        case SegMode::anchor: {
            const Message& m = take(frame, cursor, Tag::Anchor);
            if (m.payload.size() != params_.m_a)
                throw ProtocolViolation("anchor length mismatch");
            std::size_t set_index = seg.anchor_sets_sent;
            seg.anchor_sets_sent += 1;
            std::int64_t net = seg.net_offset();
            std::int64_t abs_net = net < 0 ? -net : net;
            bool large = params_.burst_mode && !seg.tried_burst &&
                         abs_net > static_cast<std::int64_t>(params_.burst_threshold);
            if (large && seg.streak >= params_.burst_rounds &&
                static_cast<std::size_t>(abs_net) < seg.x_len) {
                // guess-and-check: hypothesize one burst of |net| edits
                seg.burst_len = static_cast<std::size_t>(abs_net);
                seg.burst_is_delete = net > 0;
                seg.mode = SegMode::burst_syn;
                stats_.burst_invocations += 1;
                std::size_t width = bits_for_max(n_);
                BitSeq payload = pack_uint(kBurstReq, 4);
                payload.append(pack_uint(seg.burst_len, width));
                payload.push_back(seg.burst_is_delete);
                reply_bits(std::move(payload));
                next.push_back(std::move(seg));
                break;
            }
            std::size_t s_x =
                *anchor_set_start(seg.x_len, params_.m_a, set_index);
            std::optional<std::size_t> q;
            if (seg.y_len >= params_.m_a) {
                std::int64_t s0_x =
                    static_cast<std::int64_t>((seg.x_len - params_.m_a) / 2);
                std::int64_t s0_y =
                    (static_cast<std::int64_t>(seg.y_len) -
                     static_cast<std::int64_t>(params_.m_a)) /
                    2;
                std::int64_t expected = s0_y + (static_cast<std::int64_t>(s_x) - s0_x);
                q = align_near(y_, seg.y_start, seg.y_len, m.payload, expected,
                               params_.window_scale *
                                   std::sqrt(static_cast<double>(seg.y_len)));
            }
            if (!q) {
                if (seg.y_len < params_.m_a) {
                    seg.mode = SegMode::full;
                    reply_code(kSendFull);
                } else {
                    if (large)
                        seg.streak += 1;
                    reply_code(kRetry);
                }
                next.push_back(std::move(seg));
                break;
            }
            // split around the matched anchor; the anchor bits are known
            resolve(seg.x_start + s_x, m.payload);
            Segment left, right;
            left.x_start = seg.x_start;
            left.x_len = s_x;
            left.y_start = seg.y_start;
            left.y_len = *q;
            right.x_start = seg.x_start + s_x + params_.m_a;
            right.x_len = seg.x_len - s_x - params_.m_a;
            right.y_start = seg.y_start + *q + params_.m_a;
            right.y_len = seg.y_len - *q - params_.m_a;
            std::uint64_t cls_left = kClsVerify, cls_right = kClsVerify;
            for (auto [child, cls] : {std::pair<Segment*, std::uint64_t*>{&left, &cls_left},
                                      {&right, &cls_right}}) {
                if (child->x_len == 0)
                    continue; // nothing of X to recover (any Y leftover is dropped)
                *cls = class_for_segment(*child);
                child->mode = mode_for_class(*cls);
                std::int64_t cnet = child->net_offset();
                if (params_.burst_mode &&
                    std::llabs(cnet) >
                        static_cast<std::int64_t>(params_.burst_threshold)) {
                    if (cnet == seg.streak_net) {
                        child->streak = seg.streak + 1;
                        // tried_burst is not inherited: a child with the same
                        // offset is a new, smaller hypothesis worth one guess
                    } else {
                        child->streak = 1;
                    }
                    child->streak_net = cnet;
                }
                next.push_back(std::move(*child));
            }
            reply_code(split_code(cls_left, cls_right));
            break;
        }
        case SegMode::verify: {
            const Message& m = take(frame, cursor, Tag::Hash);
            if (piece_accepted(m.payload, y_piece, seg.x_start, seg.x_len)) {
                resolve(seg.x_start, std::move(y_piece));
                reply_flag(true);
            } else {
                seg.mode = SegMode::anchor;
                reply_flag(false);
                next.push_back(std::move(seg));
            }
            break;
        }
        case SegMode::vt: {
            const Message& syn = take(frame, cursor, Tag::VtSyndrome);
            const Message& hash = take(frame, cursor, Tag::Hash);
            VtSyndrome s{unpack_uint(syn.payload, 0, bits_for_max(seg.x_len)),
                         seg.x_len + 1};
            std::optional<BitSeq> candidate;
            try {
                if (seg.net_offset() == 1)
                    candidate = decode_deletion(y_piece, seg.x_len, s);
                else
                    candidate = decode_insertion(y_piece, seg.x_len, s);
            } catch (const NoCodeword&) {
            }
            if (candidate &&
                piece_accepted(hash.payload, *candidate, seg.x_start, seg.x_len)) {
                resolve(seg.x_start, std::move(*candidate));
                reply_flag(true);
            } else {
                seg.mode = SegMode::anchor;
                reply_flag(false);
                next.push_back(std::move(seg));
            }
            break;
        }
        case SegMode::burst_syn: {
            const Message& m = take(frame, cursor, Tag::BurstSyndromes);
            auto state = std::make_shared<BurstDecodeState>();
            try {
                BitSeq run_reply =
                    burst_decode_reply(y_piece, seg.x_len, seg.burst_len,
                                       seg.burst_is_delete, m.payload, *state);
                seg.burst_state = std::move(state);
                seg.mode = SegMode::burst_win;
                stats_.bits_d2e += run_reply.size();
                replies.push_back(make_message(Tag::BurstRunReply, next.size(),
                                               std::move(run_reply)));
            } catch (const Error&) {
                // any decode failure (no codeword, empty window, ...) refutes
                // the burst hypothesis; fall back to anchor splitting
                seg.tried_burst = true;
                seg.streak = 0;
                seg.mode = SegMode::anchor;
                reply_code(kRetry);
            }
            next.push_back(std::move(seg));
            break;
        }
        case SegMode::burst_win: {
            const Message& win = take(frame, cursor, Tag::BurstWindowBits);
            const Message& hash = take(frame, cursor, Tag::Hash);
            std::optional<BitSeq> candidate;
            try {
                candidate = burst_patch(seg.x_len, seg.burst_len, seg.burst_is_delete,
                                        *seg.burst_state, win.payload);
            } catch (const Error&) {
            }
            if (candidate &&
                piece_accepted(hash.payload, *candidate, seg.x_start, seg.x_len)) {
                resolve(seg.x_start, std::move(*candidate));
                reply_flag(true);
            } else {
                seg.tried_burst = true;
                seg.streak = 0;
                seg.burst_state.reset();
                seg.mode = SegMode::anchor;
                reply_flag(false);
                next.push_back(std::move(seg));
            }
            break;
        }
        case SegMode::full:
            throw ProtocolViolation("unreachable segment mode"); // handled above
        }
    }
    if (cursor != frame.messages.size())
        throw ProtocolViolation("frame carries more messages than segments");
    segments_ = std::move(next);
    if (segments_.empty())
        done_ = true;
    if (replies.empty())
        return std::nullopt;
    return Frame{frame.round, std::move(replies)};
}

BitSeq Decoder::result() {
    if (abort_seen_) {
        stats_.outcome = Outcome::fallback_full_transfer;
        return resolved_.front().second;
    }
    std::sort(resolved_.begin(), resolved_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    BitSeq out;
    bool contiguous = done_;
    for (const auto& [start, bits] : resolved_) {
        if (start != out.size())
            contiguous = false;
        out.append(bits);
    }
    if (!contiguous || out.size() != n_) {
        stats_.outcome = Outcome::failed;
        return out;
    }
    stats_.outcome = params_.hash.mode == HashMode::distance_sketch
                         ? Outcome::synced_within_d0
                         : Outcome::synced;
    return out;
}

// ---------------------------------------------------------------- driver

SyncResult run_sync(const BitSeq& x, const BitSeq& y, const SyncParams& params_in) {
    SyncParams params = resolve_params(params_in, x.size());
    auto [enc_ep, dec_ep] = make_channel();
    Encoder enc(x, y.size(), params);
    Decoder dec(y, x.size(), params);

    bool overran = false;
    enc_ep->send(enc.start());
    std::uint64_t rounds = 1;
    for (;;) {
        auto reply = dec.on_payload(dec_ep->recv());
        if (!reply)
            break;
        dec_ep->send(*reply);
        auto next_frame = enc.on_reply(enc_ep->recv());
        if (!next_frame)
            break;
        if (++rounds > params.max_rounds) {
            overran = true;
            break;
        }
        enc_ep->send(*next_frame);
    }

    SyncResult result;
    result.reconstructed = dec.result();
    result.stats = dec.stats();
    const SyncStats& es = enc.stats();
    result.stats.rounds = es.rounds;
    result.stats.bits_e2d = es.bits_e2d;
    result.stats.anchors_sent = es.anchors_sent;
    result.stats.hashes_sent = es.hashes_sent;
    result.stats.syndromes_sent = es.syndromes_sent;
    result.stats.pieces_sent_full = es.pieces_sent_full;
    result.stats.anchor_bits = es.anchor_bits;
    result.stats.hash_bits = es.hash_bits;
    result.stats.syndrome_bits = es.syndrome_bits;
    result.stats.full_piece_bits = es.full_piece_bits;
    result.stats.burst_bits = es.burst_bits;
    result.stats.abort_bits = es.abort_bits;
    result.stats.wire_bytes_e2d = enc_ep->bytes_sent();
    result.stats.wire_bytes_d2e = dec_ep->bytes_sent();
    if (overran || !enc.done() || !dec.done())
        result.stats.outcome = Outcome::failed;
    return result;
}

} // namespace bitsync
