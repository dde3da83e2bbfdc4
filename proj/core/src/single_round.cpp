#include "bitsync/single_round.hpp"

#include "bitsync/burst.hpp"
#include "bitsync/errors.hpp"
#include "bitsync/transport.hpp"
#include "bitsync/vt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <vector>

namespace bitsync {

namespace {

std::size_t ceil_log2(std::size_t n) {
    return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

bool match_at(const BitSeq& hay, std::size_t pos, const BitSeq& needle) {
    if (pos + needle.size() > hay.size())
        return false;
    for (std::size_t off = 0; off < needle.size(); off += 64) {
        std::size_t w = std::min<std::size_t>(64, needle.size() - off);
        if (hay.window(pos + off, w) != needle.window(off, w))
            return false;
    }
    return true;
}

// Nearest match to `expected` within +/- radius, ties to the left.
std::optional<std::size_t> find_near(const BitSeq& hay, const BitSeq& needle,
                                     std::int64_t expected, std::int64_t radius) {
    for (std::int64_t d = 0; d <= radius; ++d) {
        std::int64_t q = expected - d;
        if (q >= 0 && match_at(hay, static_cast<std::size_t>(q), needle))
            return static_cast<std::size_t>(q);
        if (d == 0)
            continue;
        q = expected + d;
        if (q >= 0 && match_at(hay, static_cast<std::size_t>(q), needle))
            return static_cast<std::size_t>(q);
    }
    return std::nullopt;
}

const Message& take(const Frame& frame, std::size_t& cursor, Tag expected) {
    if (cursor >= frame.messages.size())
        throw ProtocolViolation("frame exhausted");
    const Message& m = frame.messages[cursor++];
    if (m.tag != expected)
        throw ProtocolViolation("unexpected message tag");
    return m;
}

PiecePlan resolve_plan(PiecePlan plan, std::size_t n) {
    if (plan.piece_len == 0)
        throw ParamOutOfRange("piece_len must be positive");
    std::size_t def = 2 * ceil_log2(std::max<std::size_t>(n, 2));
    if (plan.m_a == 0)
        plan.m_a = def;
    if (plan.m_h == 0)
        plan.m_h = def;
    if (plan.m_a > plan.piece_len)
        throw ParamOutOfRange("anchor longer than a piece");
    if (plan.window_scale < 1.0)
        throw ParamOutOfRange("window_scale must be >= 1");
    plan.hash.m_h = plan.m_h;
    return plan;
}

} // namespace

PieceClass classify_piece(std::size_t y_piece_len, std::size_t x_piece_len) {
    if (y_piece_len == x_piece_len)
        return PieceClass::verify;
    if (y_piece_len + 1 == x_piece_len || y_piece_len == x_piece_len + 1)
        return PieceClass::vt;
    return PieceClass::unresolved;
}

SyncResult run_single_round(const BitSeq& x, const BitSeq& y, const PiecePlan& raw) {
    const std::size_t n = x.size();
    PiecePlan plan = resolve_plan(raw, n);
    const std::size_t piece_count = std::max<std::size_t>(1, (n + plan.piece_len - 1) / plan.piece_len);

    auto [enc_ep, dec_ep] = make_channel(8);
    SyncStats stats;

    auto piece_start = [&](std::size_t k) { return std::min(k * plan.piece_len, n); };
    auto piece_len_of = [&](std::size_t k) { return piece_start(k + 1) - piece_start(k); };

    // --- frame 1 (encoder): anchor + hash + syndrome per piece -------------
    {
        Frame f{1, {}};
        for (std::size_t k = 0; k < piece_count; ++k) {
            std::size_t s = piece_start(k), l = piece_len_of(k);
            BitSeq piece = x.slice(s, l);
            BitSeq anchor = piece.slice(0, std::min(plan.m_a, l));
            BitSeq hbits = digest(piece, plan.hash, {s, l}).bits;
            BitSeq syn = pack_uint(vt_syndrome(piece).a, bits_for_max(l));
            stats.anchors_sent++;
            stats.anchor_bits += anchor.size();
            stats.hashes_sent++;
            stats.hash_bits += hbits.size();
            stats.syndromes_sent++;
            stats.syndrome_bits += syn.size();
            f.messages.push_back(make_message(Tag::Anchor, k, std::move(anchor)));
            f.messages.push_back(make_message(Tag::Hash, k, std::move(hbits)));
            f.messages.push_back(make_message(Tag::VtSyndrome, k, std::move(syn)));
        }
        enc_ep->send(f);
    }

    // --- decoder: align, classify, resolve; reply with the status bitmap ---
    std::vector<BitSeq> resolved(piece_count);
    std::vector<bool> ok(piece_count, false);
    {
        Frame f = dec_ep->recv();
        std::size_t cursor = 0;
        std::vector<BitSeq> anchors(piece_count), hashes(piece_count);
        std::vector<VtSyndrome> syndromes(piece_count);
        for (std::size_t k = 0; k < piece_count; ++k) {
            anchors[k] = take(f, cursor, Tag::Anchor).payload;
            hashes[k] = take(f, cursor, Tag::Hash).payload;
            const Message& syn = take(f, cursor, Tag::VtSyndrome);
            std::size_t l = piece_len_of(k);
            syndromes[k] = {unpack_uint(syn.payload, 0, bits_for_max(l)), l + 1};
        }
        if (cursor != f.messages.size())
            throw ProtocolViolation("trailing messages");

        // Boundary k sits at x-position k*piece_len; boundary piece_count is
        // the string end and is aligned by definition. The window for each
        // anchor is centered on the drift carried from the last alignment.
        const auto radius = static_cast<std::int64_t>(
            std::ceil(plan.window_scale * std::sqrt(static_cast<double>(plan.piece_len))));
        std::vector<std::optional<std::size_t>> at(piece_count + 1);
        at[piece_count] = y.size();
        std::size_t last_b = 0, last_a = 0;
        for (std::size_t k = 0; k < piece_count; ++k) {
            std::int64_t expected = static_cast<std::int64_t>(last_a) +
                                    static_cast<std::int64_t>(piece_start(k)) -
                                    static_cast<std::int64_t>(last_b);
            auto pos = find_near(y, anchors[k], expected, radius);
            if (pos && *pos >= last_a) {
                at[k] = *pos;
                last_b = piece_start(k);
                last_a = *pos;
            }
        }

        Frame reply{2, {}};
        BitSeq bitmap(piece_count);
        for (std::size_t k = 0; k < piece_count; ++k) {
            if (!at[k] || !at[k + 1] || *at[k + 1] < *at[k])
                continue;
            std::size_t s = piece_start(k), l = piece_len_of(k);
            BitSeq y_piece = y.slice(*at[k], *at[k + 1] - *at[k]);
            BitSeq candidate;
            switch (classify_piece(y_piece.size(), l)) {
            case PieceClass::verify:
                candidate = std::move(y_piece);
                break;
            case PieceClass::vt:
                try {
                    candidate = y_piece.size() < l
                                    ? decode_deletion(y_piece, l, syndromes[k])
                                    : decode_insertion(y_piece, l, syndromes[k]);
                } catch (const NoCodeword&) {
                    continue;
                }
                break;
            case PieceClass::unresolved:
                continue;
            }
            bool accepted = plan.reference
                                ? candidate == plan.reference->slice(s, l)
                                : accept(Digest{hashes[k], l},
                                         digest(candidate, plan.hash, {s, l}), l,
                                         plan.hash);
            if (accepted) {
                resolved[k] = std::move(candidate);
                ok[k] = true;
                bitmap.set_bit(k, true);
            }
        }
        reply.messages.push_back(make_message(Tag::Instruction, 0, std::move(bitmap)));
        dec_ep->send(reply);
    }

    // --- frame 3 (encoder): unresolved pieces verbatim ----------------------
    {
        Frame reply = enc_ep->recv();
        std::size_t cursor = 0;
        const Message& m = take(reply, cursor, Tag::Instruction);
        if (m.payload.size() != piece_count)
            throw ProtocolViolation("bad bitmap width");
        stats.bits_d2e += m.cost_bits;
        Frame f{3, {}};
        for (std::size_t k = 0; k < piece_count; ++k) {
            if (m.payload.bit(k))
                continue;
            BitSeq piece = x.slice(piece_start(k), piece_len_of(k));
            stats.pieces_sent_full++;
            stats.full_piece_bits += piece.size();
            f.messages.push_back(make_message(Tag::FullPiece, k, std::move(piece)));
        }
        enc_ep->send(f);
        enc_ep->close();
    }

    // --- decoder: absorb the full pieces and assemble -----------------------
    BitSeq reconstructed;
    {
        Frame f = dec_ep->recv();
        std::size_t cursor = 0;
        for (std::size_t k = 0; k < piece_count; ++k) {
            if (ok[k])
                continue;
            const Message& m = take(f, cursor, Tag::FullPiece);
            if (m.segment_id != k || m.payload.size() != piece_len_of(k))
                throw ProtocolViolation("full piece mismatch");
            resolved[k] = m.payload;
        }
        if (cursor != f.messages.size())
            throw ProtocolViolation("trailing messages");
        dec_ep->close();
        for (auto& piece : resolved)
            reconstructed.append(piece);
    }

    stats.rounds = 2;
    stats.bits_e2d = stats.anchor_bits + stats.hash_bits + stats.syndrome_bits +
                     stats.full_piece_bits;
    stats.wire_bytes_e2d = enc_ep->bytes_sent();
    stats.wire_bytes_d2e = dec_ep->bytes_sent();
    stats.outcome = plan.hash.mode == HashMode::distance_sketch
                        ? Outcome::synced_within_d0
                        : Outcome::synced;
    return {std::move(reconstructed), stats};
}

} // namespace bitsync
