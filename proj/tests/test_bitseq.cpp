#include "bitsync/bitseq.hpp"
#include "bitsync/errors.hpp"

#include <doctest.h>

#include <cstdio>
#include <string>

using namespace bitsync;

TEST_CASE("parse and to_string round-trip") {
    CHECK(BitSeq::parse("").to_string() == "");
    CHECK(BitSeq::parse("1001").to_string() == "1001");
    CHECK(BitSeq::parse("10 01\n11").to_string() == "100111");
    CHECK_THROWS_AS(BitSeq::parse("102"), DomainError);

    std::string long_str;
    for (int i = 0; i < 300; ++i)
        long_str.push_back((i * 7 + i / 13) % 3 ? '1' : '0');
    CHECK(BitSeq::parse(long_str).to_string() == long_str);
}

TEST_CASE("bit access and set_bit") {
    BitSeq b(130);
    CHECK(b.size() == 130);
    for (std::size_t i = 0; i < 130; ++i)
        CHECK_FALSE(b.bit(i));
    b.set_bit(0, true);
    b.set_bit(63, true);
    b.set_bit(64, true);
    b.set_bit(129, true);
    CHECK(b.weight() == 4);
    b.set_bit(64, false);
    CHECK(b.weight() == 3);
    CHECK(b.bit(129));
}

TEST_CASE("push_back and append across word boundaries") {
    BitSeq a;
    std::string expect;
    for (int i = 0; i < 70; ++i) {
        bool v = (i % 3) == 0;
        a.push_back(v);
        expect.push_back(v ? '1' : '0');
    }
    CHECK(a.to_string() == expect);

    for (std::size_t shift : {0u, 1u, 13u, 63u, 64u, 65u}) {
        BitSeq left = BitSeq::random(shift, 1);
        BitSeq right = BitSeq::random(150, 2);
        BitSeq joined = concat(left, right);
        CHECK(joined.size() == shift + 150);
        CHECK(joined.to_string() == left.to_string() + right.to_string());
    }
}

TEST_CASE("slice matches string slicing") {
    BitSeq b = BitSeq::random(200, 42);
    std::string s = b.to_string();
    for (std::size_t start : {0u, 1u, 63u, 64u, 100u, 199u, 200u}) {
        for (std::size_t len : {0u, 1u, 64u, 130u}) {
            if (start + len > 200)
                continue;
            CHECK(b.slice(start, len).to_string() == s.substr(start, len));
        }
    }
    CHECK_THROWS_AS(b.slice(150, 51), PositionOutOfRange);
}

TEST_CASE("window extracts up to 64 bits") {
    BitSeq b = BitSeq::parse("1011001110001111");
    CHECK(b.window(0, 4) == 0b1101u); // bit j of result = bit(pos+j)
    CHECK(b.window(2, 3) == 0b011u);
    CHECK(b.window(0, 0) == 0);
    BitSeq r = BitSeq::random(300, 7);
    for (std::size_t pos : {0u, 60u, 64u, 200u, 236u}) {
        std::uint64_t w = r.window(pos, 64);
        for (std::size_t j = 0; j < 64; ++j)
            CHECK(((w >> j) & 1u) == static_cast<unsigned>(r.bit(pos + j)));
    }
    CHECK_THROWS_AS(r.window(290, 32), PositionOutOfRange);
}

TEST_CASE("checksum is the 1-based weighted sum") {
    CHECK(BitSeq::parse("1001").checksum() == 5);
    CHECK(BitSeq::parse("0110").checksum() == 5);
    CHECK(BitSeq::parse("1010").checksum() == 4);
    CHECK(BitSeq{}.checksum() == 0);

    BitSeq r = BitSeq::random(500, 9);
    std::uint64_t naive = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r.bit(i))
            naive += i + 1;
    CHECK(r.checksum() == naive);
}

TEST_CASE("runs and run_count") {
    CHECK(BitSeq{}.run_count() == 0);
    CHECK(BitSeq::parse("0").run_count() == 1);
    CHECK(BitSeq::parse("1111").run_count() == 1);
    CHECK(BitSeq::parse("1010").run_count() == 4);

    RunIndex idx = BitSeq::parse("110001").runs();
    REQUIRE(idx.size() == 3);
    CHECK(idx[0] == Run{0, 2, true});
    CHECK(idx[1] == Run{2, 3, false});
    CHECK(idx[2] == Run{5, 1, true});

    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        BitSeq r = BitSeq::random(129 + seed * 37, seed);
        RunIndex runs = r.runs();
        CHECK(runs.size() == r.run_count());
        std::size_t covered = 0;
        for (const Run& run : runs) {
            CHECK(run.start == covered);
            covered += run.length;
            for (std::size_t i = run.start; i < run.start + run.length; ++i)
                CHECK(r.bit(i) == run.bit);
        }
        CHECK(covered == r.size());
    }
}

TEST_CASE("hamming distance") {
    BitSeq a = BitSeq::parse("10110");
    BitSeq b = BitSeq::parse("00111");
    CHECK(a.hamming(b) == 2);
    CHECK(a.hamming(a) == 0);
    CHECK_THROWS_AS(a.hamming(BitSeq::parse("1")), DomainError);
}

TEST_CASE("byte round-trip is MSB-first") {
    BitSeq b = BitSeq::parse("10100000"
                             "11");
    auto bytes = b.to_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0xA0);
    CHECK(bytes[1] == 0xC0);
    CHECK(BitSeq::from_bytes(bytes, 10) == b);

    BitSeq r = BitSeq::random(777, 3);
    CHECK(BitSeq::from_bytes(r.to_bytes(), 777) == r);
}

TEST_CASE("random is deterministic per seed") {
    CHECK(BitSeq::random(100, 5) == BitSeq::random(100, 5));
    CHECK(BitSeq::random(100, 5) != BitSeq::random(100, 6));
    // roughly balanced
    std::size_t w = BitSeq::random(100000, 5).weight();
    CHECK(w > 48000);
    CHECK(w < 52000);
}

TEST_CASE("equality ignores word-capacity differences") {
    BitSeq a = BitSeq::parse("1011");
    BitSeq b = BitSeq::random(200, 1).slice(0, 0);
    CHECK(b == BitSeq{});
    BitSeq c = BitSeq::parse("10110").slice(0, 4);
    CHECK(a == c);
}

TEST_CASE("file round-trip in both modes") {
    BitSeq b = BitSeq::random(1000, 11);
    std::string raw = "/tmp/bitsync_test_bits.raw";
    std::string txt = "/tmp/bitsync_test_bits.txt";
    write_bits_file(raw, b, false);
    write_bits_file(txt, b, true);
    // raw mode loses the exact bit length (padded to bytes)
    BitSeq raw_back = read_bits_file(raw, false);
    CHECK(raw_back.slice(0, 1000) == b);
    CHECK(read_bits_file(txt, true) == b);
    std::remove(raw.c_str());
    std::remove(txt.c_str());
}
