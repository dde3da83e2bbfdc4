#include "bitsync/edit.hpp"
#include "bitsync/errors.hpp"

#include <doctest.h>

using namespace bitsync;

TEST_CASE("apply single events") {
    BitSeq x = BitSeq::parse("1101100010010100110");

    EditScript del{{{EditKind::Delete, 14, false, {}, 0}}};
    CHECK(apply(x, del).to_string() == "110110001001010110");

    EditScript ins{{{EditKind::Insert, 18, true, {}, 0}}};
    CHECK(apply(BitSeq::parse("110110001001010110"), ins).to_string() ==
          "1101100010010101101");

    EditScript both{{{EditKind::Delete, 14, false, {}, 0}, {EditKind::Insert, 18, true, {}, 0}}};
    CHECK(apply(x, both).to_string() == "1101100010010101101");

    EditScript sub{{{EditKind::Substitute, 0, false, {}, 0}}};
    CHECK(apply(BitSeq::parse("101"), sub).to_string() == "001");

    EditScript bd{{{EditKind::BurstDelete, 2, false, {}, 3}}};
    CHECK(apply(BitSeq::parse("10011100100011"), bd).to_string() == "10100100011");

    EditScript bi{{{EditKind::BurstInsert, 2, false, BitSeq::parse("011"), 0}}};
    CHECK(apply(BitSeq::parse("10100100011"), bi).to_string() == "10011100100011");
}

TEST_CASE("apply validates positions") {
    BitSeq x = BitSeq::parse("1010");
    CHECK_THROWS_AS(apply(x, EditScript{{{EditKind::Delete, 4, false, {}, 0}}}),
                    PositionOutOfRange);
    CHECK_NOTHROW(apply(x, EditScript{{{EditKind::Insert, 4, true, {}, 0}}}));
    CHECK_THROWS_AS(apply(x, EditScript{{{EditKind::Insert, 5, true, {}, 0}}}),
                    PositionOutOfRange);
    CHECK_THROWS_AS(apply(x, EditScript{{{EditKind::BurstDelete, 3, false, {}, 2}}}),
                    PositionOutOfRange);
}

TEST_CASE("serialize and parse round-trip") {
    EditScript s{{
        {EditKind::Delete, 5, false, {}, 0},
        {EditKind::Insert, 7, true, {}, 0},
        {EditKind::Substitute, 2, false, {}, 0},
        {EditKind::BurstDelete, 9, false, {}, 4},
        {EditKind::BurstInsert, 1, false, BitSeq::parse("0110"), 0},
    }};
    CHECK(EditScript::parse(s.serialize()) == s);
    CHECK(s.deletions() == 5);
    CHECK(s.insertions() == 5);
    CHECK(s.substitutions() == 1);
    CHECK_THROWS_AS(EditScript::parse("Q 3"), DomainError);
}

TEST_CASE("random_script has the requested edit counts") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EditScript s =
            random_script(5000, 7, 4, 3, {{20, true}, {15, false}, {30, true}}, seed);
        CHECK(s.deletions() == 7 + 20 + 30);
        CHECK(s.insertions() == 4 + 15);
        CHECK(s.substitutions() == 3);
        BitSeq x = BitSeq::random(5000, seed + 100);
        BitSeq y = apply(x, s);
        CHECK(y.size() == 5000 - 57 + 19);
    }
}

TEST_CASE("random_script positions are collision-free on tiny strings") {
    // n equal to the edit count forces every position to be used exactly once
    EditScript s = random_script(6, 6, 0, 0, {}, 1);
    BitSeq x = BitSeq::random(6, 2);
    CHECK(apply(x, s).size() == 0);
    CHECK_THROWS_AS(random_script(5, 6, 0, 0, {}, 1), TooManyEdits);
    CHECK_THROWS_AS(random_script(10, 0, 0, 0, {{11, true}}, 1), TooManyEdits);
    CHECK_THROWS_AS(random_script(10, 0, 0, 0, {{11, false}}, 1), BadBurstLength);
}

TEST_CASE("inverse_script undoes the script") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        BitSeq x = BitSeq::random(2000, seed);
        EditScript s = random_script(2000, 5, 5, 5, {{25, true}, {10, false}}, seed + 50);
        BitSeq y = apply(x, s);
        EditScript inv = inverse_script(x, s);
        CHECK(apply(y, inv) == x);
    }
}

TEST_CASE("random_script is deterministic per seed") {
    EditScript a = random_script(1000, 3, 3, 3, {{10, true}}, 9);
    EditScript b = random_script(1000, 3, 3, 3, {{10, true}}, 9);
    CHECK(a == b);
}
