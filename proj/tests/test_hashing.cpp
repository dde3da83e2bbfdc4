#include "bitsync/hashing.hpp"
#include "bitsync/errors.hpp"
#include "bitsync/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace bitsync;

namespace {

BitSeq xor_seq(const BitSeq& a, const BitSeq& b) {
    BitSeq out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.set_bit(i, a.bit(i) != b.bit(i));
    return out;
}

} // namespace

TEST_CASE("h3_hash basics") {
    HashSpec spec{HashMode::exact_h3, 20, 0, 0.02, 7};
    HashContext ctx{0, 64};

    CHECK(h3_hash(BitSeq(64), spec, ctx).bits == BitSeq(20));

    BitSeq x = BitSeq::random(64, 1);
    Digest d1 = h3_hash(x, spec, ctx);
    Digest d2 = h3_hash(x, spec, ctx);
    CHECK(d1 == d2);
    CHECK(d1.bits.size() == 20);
    CHECK(d1.subject_len == 64);

    // different context or seed gives a different matrix
    CHECK(h3_hash(x, spec, {1, 64}) != d1);
    HashSpec other = spec;
    other.seed = 8;
    CHECK(h3_hash(x, other, ctx) != d1);
}

TEST_CASE("h3_hash is GF(2)-linear") {
    HashSpec spec{HashMode::exact_h3, 33, 0, 0.02, 3};
    HashContext ctx{5, 100};
    for (std::uint64_t s = 0; s < 10; ++s) {
        BitSeq x = BitSeq::random(100, s);
        BitSeq y = BitSeq::random(100, s + 100);
        Digest fx = h3_hash(x, spec, ctx);
        Digest fy = h3_hash(y, spec, ctx);
        Digest fxy = h3_hash(xor_seq(x, y), spec, ctx);
        CHECK(fxy.bits == xor_seq(fx.bits, fy.bits));
    }
}

TEST_CASE("h3 collision rate near 2^-m_h") {
    HashSpec spec{HashMode::exact_h3, 20, 0, 0.02, 11};
    HashContext ctx{0, 64};
    int collisions = 0;
    const int trials = 100000;
    SplitMix rng(123);
    for (int t = 0; t < trials; ++t) {
        BitSeq x = BitSeq::random(64, rng.next());
        BitSeq y = BitSeq::random(64, rng.next());
        if (x == y)
            continue;
        if (h3_hash(x, spec, ctx) == h3_hash(y, spec, ctx))
            ++collisions;
    }
    // expected ~0.1 collisions; allow generous slack
    CHECK(collisions <= 3);
}

TEST_CASE("h3_hash supports m_h > 64") {
    HashSpec spec{HashMode::exact_h3, 200, 0, 0.02, 5};
    BitSeq x = BitSeq::random(500, 2);
    Digest d = h3_hash(x, spec, {0, 500});
    CHECK(d.bits.size() == 200);
    CHECK(d == h3_hash(x, spec, {0, 500}));
    BitSeq y = x;
    y.set_bit(250, !y.bit(250));
    CHECK(d != h3_hash(y, spec, {0, 500}));
}

TEST_CASE("sketch determinism and density") {
    HashSpec spec{HashMode::distance_sketch, 2000, 50, 0.02, 9};
    BitSeq x = BitSeq::random(100000, 4);
    Digest d = sketch(x, spec, {0, 100000});
    CHECK(d == sketch(x, spec, {0, 100000}));
    CHECK(sketch(BitSeq(1000), spec, {0, 1000}).bits == BitSeq(2000));

    HashSpec dense = spec;
    dense.kappa_s = 5000;
    CHECK_THROWS_AS(sketch(BitSeq::random(100, 1), dense, {0, 100}), DensityOutOfRange);
}

TEST_CASE("estimate_distance inverts the sketch") {
    const std::size_t n = 100000;
    HashSpec spec{HashMode::distance_sketch, 2000, 50, 0.02, 2};
    BitSeq x = BitSeq::random(n, 10);

    SUBCASE("identical strings estimate 0") {
        Digest dx = sketch(x, spec, {0, n});
        CHECK(estimate_distance(dx, dx, n, spec) == 0.0);
        CHECK(accept(dx, dx, n, spec));
    }

    SUBCASE("d_H = 1000 estimates near 0.01") {
        BitSeq y = x;
        SplitMix rng(77);
        std::size_t flipped = 0;
        while (flipped < 1000) {
            std::size_t p = rng.below(n);
            if (y.bit(p) == x.bit(p)) {
                y.set_bit(p, !y.bit(p));
                ++flipped;
            }
        }
        Digest dx = sketch(x, spec, {0, n});
        Digest dy = sketch(y, spec, {0, n});
        double est = estimate_distance(dx, dy, n, spec);
        CHECK(est > 0.005);
        CHECK(est < 0.02);
        CHECK(accept(dx, dy, n, spec)); // est < d0 = 0.02
        HashSpec tight = spec;
        tight.d0 = 0.005;
        CHECK_FALSE(accept(dx, dy, n, tight));
    }

    SUBCASE("very different strings are rejected") {
        BitSeq y = BitSeq::random(n, 999);
        Digest dx = sketch(x, spec, {0, n});
        Digest dy = sketch(y, spec, {0, n});
        CHECK(estimate_distance(dx, dy, n, spec) >= spec.d0);
        CHECK_FALSE(accept(dx, dy, n, spec));
    }

    SUBCASE("xor density above the invertible range saturates to 1") {
        Digest dx{BitSeq(2000), n};
        BitSeq ones(2000);
        for (std::size_t i = 0; i < 2000; ++i)
            ones.set_bit(i, true);
        Digest dy{ones, n};
        CHECK(estimate_distance(dx, dy, n, spec) == 1.0);
    }
}

TEST_CASE("resolved_kappa defaults to 1/d0") {
    HashSpec spec;
    spec.d0 = 0.02;
    CHECK(resolved_kappa(spec) == doctest::Approx(50.0));
    spec.kappa_s = 10;
    CHECK(resolved_kappa(spec) == doctest::Approx(10.0));
}

TEST_CASE("digest dispatches on mode") {
    BitSeq x = BitSeq::random(1000, 6);
    HashSpec h3{HashMode::exact_h3, 20, 0, 0.02, 1};
    HashSpec sk{HashMode::distance_sketch, 100, 50, 0.02, 1};
    CHECK(digest(x, h3, {0, 1000}) == h3_hash(x, h3, {0, 1000}));
    CHECK(digest(x, sk, {0, 1000}) == sketch(x, sk, {0, 1000}));
}
