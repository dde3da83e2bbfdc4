#include "bitsync/burst.hpp"
#include "bitsync/edit.hpp"
#include "bitsync/errors.hpp"
#include "bitsync/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace bitsync;

namespace {

BitSeq burst_delete(const BitSeq& x, std::size_t pos, std::size_t len) {
    return apply(x, {{{EditKind::BurstDelete, pos, false, {}, len}}});
}

BitSeq burst_insert(const BitSeq& x, std::size_t pos, const BitSeq& block) {
    return apply(x, {{{EditKind::BurstInsert, pos, false, block, 0}}});
}

} // namespace

TEST_CASE("split_planes on the 14-bit example") {
    BitSeq x = BitSeq::parse("10011100100011");
    PlaneSet p = split_planes(x, 3);
    REQUIRE(p.planes.size() == 3);
    CHECK(p.planes[0].to_string() == "11001");
    CHECK(p.planes[1].to_string() == "01001");
    CHECK(p.planes[2].to_string() == "0110");
    CHECK(interleave(p) == x);

    CHECK(split_planes(x, 1).planes[0] == x);
    PlaneSet full = split_planes(x, x.size());
    for (const BitSeq& plane : full.planes)
        CHECK(plane.size() == 1);
    CHECK(interleave(full) == x);
    CHECK_THROWS_AS(split_planes(x, 0), BadBurstLength);
    CHECK_THROWS_AS(split_planes(x, 15), BadBurstLength);
}

TEST_CASE("split and interleave round-trip at non-dividing lengths") {
    for (std::size_t n : {5u, 63u, 64u, 100u, 1000u}) {
        BitSeq x = BitSeq::random(n, n);
        for (std::size_t B : {1u, 2u, 3u, 7u}) {
            if (B > n)
                continue;
            PlaneSet p = split_planes(x, B);
            std::size_t total = 0;
            for (std::size_t k = 1; k <= B; ++k) {
                CHECK(p.planes[k - 1].size() == plane_length(n, B, k));
                total += p.planes[k - 1].size();
            }
            CHECK(total == n);
            CHECK(interleave(p) == x);
        }
    }
}

TEST_CASE("burst_window formula") {
    CHECK(burst_window({1, 2}, {1, 1}) == BurstWindow{1, 2});
    CHECK(burst_window({4, 4}, {4, 4}) == BurstWindow{4, 4});
    CHECK(burst_window({5, 9}, {2, 3}) == BurstWindow{4, 4});
    CHECK_THROWS_AS(burst_window({5, 9}, {1, 2}), EmptyWindow);
}

TEST_CASE("paper burst trace") {
    BitSeq x = BitSeq::parse("10011100100011");
    BitSeq y = burst_delete(x, 2, 3);
    CHECK(y.to_string() == "10100100011");

    // step 1: syndromes of planes 1 and 3: 2 mod 6 and 0 mod 5
    CHECK(vt_syndrome(BitSeq::parse("11001")) == VtSyndrome{2, 6});
    CHECK(vt_syndrome(BitSeq::parse("0110")) == VtSyndrome{0, 5});

    BitSeq syn = burst_syndromes_payload(x, 3);
    std::size_t ws = burst_syndrome_width(14, 3);
    CHECK(ws == 3); // plane 1 has 5 bits; residues 0..5
    CHECK(unpack_uint(syn, 0, ws) == 2);
    CHECK(unpack_uint(syn, ws, ws) == 0);

    // step 2: runs (1,2) and (1,1) -> j*=1, l*=2
    BurstDecodeState state;
    BitSeq reply = burst_decode_reply(y, 14, 3, true, syn, state);
    CHECK(state.x1.to_string() == "11001");
    CHECK(state.xB.to_string() == "0110");
    CHECK(state.window == BurstWindow{1, 2});

    // step 3: middle plane bits 1..2 of 01001 -> "01", 2 payload bits
    BurstWindow w;
    BitSeq window_bits = burst_window_payload(x, 3, true, reply, &w);
    CHECK(w == BurstWindow{1, 2});
    CHECK(window_bits.to_string() == "01");

    CHECK(burst_patch(14, 3, true, state, window_bits) == x);
}

TEST_CASE("run_single_burst exactness, deletions") {
    SplitMix rng(21);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 200 + rng.below(2000);
        std::size_t B = 1 + rng.below(std::min<std::size_t>(n / 2, 64));
        std::size_t pos = rng.below(n - B + 1);
        BitSeq x = BitSeq::random(n, rng.next());
        BitSeq y = burst_delete(x, pos, B);
        auto [rec, stats] = run_single_burst(x, y, B, true);
        REQUIRE(rec == x);
        CHECK(stats.bits_e2d > 0);
        CHECK(stats.wire_bytes_e2d > stats.bits_e2d / 8);
    }
}

TEST_CASE("run_single_burst exactness, insertions") {
    SplitMix rng(22);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 200 + rng.below(2000);
        std::size_t B = 1 + rng.below(64);
        std::size_t pos = rng.below(n + 1);
        BitSeq x = BitSeq::random(n, rng.next());
        BitSeq y = burst_insert(x, pos, BitSeq::random(B, rng.next()));
        auto [rec, stats] = run_single_burst(x, y, B, false);
        REQUIRE(rec == x);
    }
}

TEST_CASE("burst-edit property on random bursts") {
    SplitMix rng(23);
    for (int t = 0; t < 1000; ++t) {
        std::size_t n = 50 + rng.below(500);
        std::size_t B = 2 + rng.below(std::min<std::size_t>(n / 2, 40));
        std::size_t s = rng.below(n - B + 1); // 0-based start; deleted bits s+1..s+B 1-based
        std::vector<std::uint64_t> p(B + 1);
        for (std::size_t k = 1; k <= B; ++k) {
            // the deleted global position g == k (mod B) inside the burst
            std::uint64_t g = s + 1 + ((k + B - 1 - (s % B)) % B);
            REQUIRE(g >= s + 1);
            REQUIRE(g <= s + B);
            p[k] = (g - k) / B + 1;
        }
        bool decreased = false;
        for (std::size_t k = 1; k < B; ++k) {
            REQUIRE(p[k] >= p[k + 1]);
            if (p[k] > p[k + 1]) {
                REQUIRE_FALSE(decreased);
                decreased = true;
            }
        }
        REQUIRE(p[1] <= p[B] + 1);
    }
}

TEST_CASE("cost accounting matches the window formula") {
    SplitMix rng(24);
    double mean_total = 0;
    const int trials = 100;
    const std::size_t n = 20000, B = 50;
    for (int t = 0; t < trials; ++t) {
        BitSeq x = BitSeq::random(n, rng.next());
        BitSeq y = burst_delete(x, rng.below(n - B + 1), B);
        auto [rec, stats] = run_single_burst(x, y, B, true);
        REQUIRE(rec == x);
        mean_total += static_cast<double>(stats.bits_e2d);
    }
    mean_total /= trials;
    double thm3 = 2 * std::log2(1.0 + static_cast<double>(n) / B) + 3.0 * (B - 2);
    CHECK(mean_total <= thm3);
    double lb = 2 * std::log2(1.0 + static_cast<double>(n) / B) + (2.0 - 1.0 / B) * (B - 2);
    CHECK(mean_total >= lb * 0.9);
}

TEST_CASE("wrong hypothesis surfaces BurstHypothesisFailed") {
    BitSeq x = BitSeq::random(500, 1);
    BitSeq y = burst_delete(x, 100, 10);
    CHECK_THROWS_AS(run_single_burst(x, y, 9, true), BurstHypothesisFailed);
    CHECK_THROWS_AS(run_single_burst(x, y, 10, false), BurstHypothesisFailed);
}
