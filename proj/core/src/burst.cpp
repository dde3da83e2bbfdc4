#include "bitsync/burst.hpp"

#include "bitsync/errors.hpp"

#include <algorithm>
#include <bit>

namespace bitsync {

std::size_t bits_for_max(std::uint64_t maxval) {
    return static_cast<std::size_t>(std::bit_width(maxval));
}

namespace {

// split without the public B <= |x| requirement (short/empty planes allowed)
PlaneSet split_lenient(const BitSeq& x, std::size_t B) {
    if (B < 1)
        throw BadBurstLength("burst length must be >= 1");
    PlaneSet out;
    out.B = B;
    out.planes.resize(B);
    for (std::size_t k = 1; k <= B; ++k) {
        BitSeq plane(plane_length(x.size(), B, k));
        out.planes[k - 1] = std::move(plane);
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.bit(i))
            out.planes[i % B].set_bit(i / B, true);
    return out;
}

// 1-based span of the run containing 0-based position pos.
PlaneRun run_containing(const RunIndex& runs, std::size_t pos) {
    auto it = std::upper_bound(runs.begin(), runs.end(), pos,
                               [](std::size_t p, const Run& r) { return p < r.start; });
    if (it == runs.begin())
        throw BurstHypothesisFailed("edit position before first run");
    const Run& r = *(it - 1);
    return {r.start + 1, r.start + r.length};
}

std::size_t run_index_of(const RunIndex& runs, std::size_t pos) {
    auto it = std::upper_bound(runs.begin(), runs.end(), pos,
                               [](std::size_t p, const Run& r) { return p < r.start; });
    return static_cast<std::size_t>(it - runs.begin()); // 1-based
}

std::size_t middle_planes(std::size_t B) { return B >= 2 ? B - 2 : 0; }

} // namespace

std::size_t plane_length(std::size_t n, std::size_t B, std::size_t k) {
    return n >= k ? (n - k) / B + 1 : 0;
}

PlaneSet split_planes(const BitSeq& x, std::size_t B) {
    if (B < 1 || B > x.size())
        throw BadBurstLength("burst length out of range");
    return split_lenient(x, B);
}

BitSeq interleave(const PlaneSet& planes) {
    std::size_t n = 0;
    for (const BitSeq& p : planes.planes)
        n += p.size();
    BitSeq out(n);
    for (std::size_t i = 0; i < n; ++i)
        if (planes.planes[i % planes.B].bit(i / planes.B))
            out.set_bit(i, true);
    return out;
}

BurstWindow burst_window(PlaneRun run1, PlaneRun runB) {
    BurstWindow w;
    w.j_star = std::max(run1.j - 1, runB.j);
    w.l_star = std::min(run1.l, runB.l + 1);
    if (w.j_star > w.l_star)
        throw EmptyWindow("burst window is empty");
    return w;
}

std::size_t burst_syndrome_width(std::size_t lx, std::size_t B) {
    return bits_for_max(plane_length(lx, B, 1));
}

std::size_t burst_reply_width(std::size_t lx, std::size_t B, bool is_delete) {
    // deletion: run index into an X plane; insertion: j*/l* over a Y plane
    std::uint64_t bound = plane_length(lx, B, 1) + (is_delete ? 0 : 1);
    return bits_for_max(std::max<std::uint64_t>(bound, 2) - 1);
}

BitSeq burst_syndromes_payload(const BitSeq& x, std::size_t B) {
    PlaneSet planes = split_lenient(x, B);
    std::size_t w = burst_syndrome_width(x.size(), B);
    BitSeq out = pack_uint(vt_syndrome(planes.planes.front()).a, w);
    out.append(pack_uint(vt_syndrome(planes.planes.back()).a, w));
    return out;
}

BitSeq burst_decode_reply(const BitSeq& y, std::size_t lx, std::size_t B, bool is_delete,
                          const BitSeq& syndromes, BurstDecodeState& state) {
    std::size_t expected = is_delete ? (lx >= B ? lx - B : throw BurstHypothesisFailed(
                                                              "burst longer than string"))
                                     : lx + B;
    if (y.size() != expected)
        throw BurstHypothesisFailed("length inconsistent with burst hypothesis");

    std::size_t ws = burst_syndrome_width(lx, B);
    if (syndromes.size() != 2 * ws)
        throw ProtocolViolation("bad burst syndrome payload");
    std::uint64_t a1 = unpack_uint(syndromes, 0, ws);
    std::uint64_t aB = unpack_uint(syndromes, ws, ws);

    state.y_planes = split_lenient(y, B);
    std::size_t n1 = plane_length(lx, B, 1);
    std::size_t nB = plane_length(lx, B, B);
    if (a1 > n1 || aB > nB)
        throw BurstHypothesisFailed("syndrome out of range");

    std::size_t wr = burst_reply_width(lx, B, is_delete);
    try {
        if (is_delete) {
            VtDecodeResult r1 =
                decode_deletion_at(state.y_planes.planes.front(), n1, {a1, n1 + 1});
            VtDecodeResult rB =
                decode_deletion_at(state.y_planes.planes.back(), nB, {aB, nB + 1});
            state.x1 = r1.x;
            state.xB = rB.x;
            RunIndex runs1 = r1.x.runs();
            RunIndex runsB = rB.x.runs();
            state.window =
                burst_window(run_containing(runs1, r1.pos), run_containing(runsB, rB.pos));
            BitSeq reply = pack_uint(run_index_of(runs1, r1.pos) - 1, wr);
            reply.append(pack_uint(run_index_of(runsB, rB.pos) - 1, wr));
            return reply;
        }
        VtDecodeResult r1 = decode_insertion_at(state.y_planes.planes.front(), n1, {a1, n1 + 1});
        VtDecodeResult rB = decode_insertion_at(state.y_planes.planes.back(), nB, {aB, nB + 1});
        state.x1 = r1.x;
        state.xB = rB.x;
        // runs of the received (Y) planes bound the insertion position
        state.window = burst_window(run_containing(state.y_planes.planes.front().runs(), r1.pos),
                                    run_containing(state.y_planes.planes.back().runs(), rB.pos));
        BitSeq reply = pack_uint(state.window.j_star - 1, wr);
        reply.append(pack_uint(state.window.l_star - 1, wr));
        return reply;
    } catch (const NoCodeword&) {
        throw BurstHypothesisFailed("plane VT decode failed");
    } catch (const EmptyWindow&) {
        throw BurstHypothesisFailed("burst window is empty");
    }
}

BitSeq burst_window_payload(const BitSeq& x, std::size_t B, bool is_delete,
                            const BitSeq& reply, BurstWindow* window_out) {
    std::size_t wr = burst_reply_width(x.size(), B, is_delete);
    if (reply.size() != 2 * wr)
        throw ProtocolViolation("bad burst reply payload");
    PlaneSet planes = split_lenient(x, B);

    BurstWindow w;
    try {
        if (is_delete) {
            std::uint64_t r1 = unpack_uint(reply, 0, wr) + 1;
            std::uint64_t rB = unpack_uint(reply, wr, wr) + 1;
            RunIndex runs1 = planes.planes.front().runs();
            RunIndex runsB = planes.planes.back().runs();
            if (r1 > runs1.size() || rB > runsB.size())
                throw BurstHypothesisFailed("run index out of range");
            const Run& s1 = runs1[r1 - 1];
            const Run& sB = runsB[rB - 1];
            w = burst_window({s1.start + 1, s1.start + s1.length},
                             {sB.start + 1, sB.start + sB.length});
        } else {
            w.j_star = unpack_uint(reply, 0, wr) + 1;
            w.l_star = unpack_uint(reply, wr, wr) + 1;
            if (w.j_star > w.l_star)
                throw EmptyWindow("burst window is empty");
        }
    } catch (const EmptyWindow&) {
        throw BurstHypothesisFailed("burst window is empty");
    }
    if (window_out)
        *window_out = w;

    // W bits per middle plane, bits j*..l* (1-based), zero-padded past the end
    std::size_t W = static_cast<std::size_t>(w.l_star - w.j_star + 1);
    BitSeq out(W * middle_planes(B));
    std::size_t field = 0;
    for (std::size_t k = 2; k + 1 <= B && B >= 2; ++k, ++field) {
        const BitSeq& plane = planes.planes[k - 1];
        for (std::size_t t = 0; t < W; ++t) {
            std::size_t p = static_cast<std::size_t>(w.j_star) - 1 + t;
            if (p < plane.size() && plane.bit(p))
                out.set_bit(field * W + t, true);
        }
    }
    return out;
}

BitSeq burst_patch(std::size_t lx, std::size_t B, bool is_delete,
                   const BurstDecodeState& state, const BitSeq& window_bits) {
    const BurstWindow& w = state.window;
    std::size_t W = static_cast<std::size_t>(w.l_star - w.j_star + 1);
    if (window_bits.size() != W * middle_planes(B))
        throw ProtocolViolation("bad burst window payload");

    PlaneSet result;
    result.B = B;
    result.planes.resize(B);
    result.planes.front() = state.x1;
    result.planes.back() = state.xB;

    std::size_t field = 0;
    for (std::size_t k = 2; k + 1 <= B && B >= 2; ++k, ++field) {
        const BitSeq& yk = state.y_planes.planes[k - 1];
        std::size_t m = plane_length(lx, B, k);
        std::size_t js = static_cast<std::size_t>(w.j_star);
        BitSeq xk;
        if (is_delete) {
            // X^k = Y^k[1..j*-1] + w_k + Y^k[l*..], w_k = X^k[j*..min(l*, m)]
            std::size_t le = std::min<std::size_t>(static_cast<std::size_t>(w.l_star), m);
            if (js > m || js < 1 || yk.size() + 1 != m)
                throw BurstHypothesisFailed("window outside plane");
            xk = yk.slice(0, js - 1);
            xk.append(window_bits.slice(field * W, le - js + 1));
            xk.append(yk.slice(le - 1, yk.size() - (le - 1)));
        } else {
            // X^k = Y^k[1..j*-1] + w_k + Y^k[l*+1..], w_k = X^k[j*..l*-1],
            // with l* clamped to this plane's length
            std::size_t ls = std::min<std::size_t>(static_cast<std::size_t>(w.l_star), m + 1);
            if (yk.size() != m + 1 || js < 1 || js > ls)
                throw BurstHypothesisFailed("window outside plane");
            xk = yk.slice(0, js - 1);
            xk.append(window_bits.slice(field * W, ls - js));
            xk.append(yk.slice(ls, yk.size() - ls));
        }
        if (xk.size() != m)
            throw BurstHypothesisFailed("patched plane has wrong length");
        result.planes[k - 1] = std::move(xk);
    }
    BitSeq x = interleave(result);
    if (x.size() != lx)
        throw BurstHypothesisFailed("reconstruction has wrong length");
    return x;
}

std::pair<BitSeq, BurstStats> run_single_burst(const BitSeq& x, const BitSeq& y,
                                               std::size_t B, bool is_delete) {
    auto [enc, dec] = make_channel();
    BurstStats stats;

    // step 1: encoder sends plane syndromes
    Frame f1{1, {make_message(Tag::BurstSyndromes, 0, burst_syndromes_payload(x, B))}};
    stats.bits_e2d += f1.messages[0].cost_bits;
    enc->send(f1);

    // step 2: decoder decodes edge planes and replies
    Frame r1 = dec->recv();
    BurstDecodeState state;
    BitSeq reply = burst_decode_reply(y, x.size(), B, is_delete, r1.messages.at(0).payload, state);
    Frame f2{1, {make_message(Tag::BurstRunReply, 0, reply)}};
    stats.bits_d2e += f2.messages[0].cost_bits;
    dec->send(f2);

    // step 3: encoder sends the middle-plane window bits
    Frame r2 = enc->recv();
    Frame f3{2, {make_message(Tag::BurstWindowBits, 0,
                              burst_window_payload(x, B, is_delete, r2.messages.at(0).payload))}};
    stats.bits_e2d += f3.messages[0].cost_bits;
    enc->send(f3);

    Frame r3 = dec->recv();
    BitSeq reconstructed = burst_patch(x.size(), B, is_delete, state, r3.messages.at(0).payload);

    stats.wire_bytes_e2d = enc->bytes_sent();
    stats.wire_bytes_d2e = dec->bytes_sent();
    return {std::move(reconstructed), stats};
}

} // namespace bitsync
