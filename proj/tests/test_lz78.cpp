#include <doctest.h>

#include <cmath>

#include "eclab/codec.hpp"
#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/rng.hpp"

using namespace eclab;

TEST_CASE("LZ78 phrase-stream lengths") {
    CHECK(lz78::code_len(BitString::from_text("0")) == 1);
    CHECK(lz78::code_len(BitString::from_text("00")) == 2);
    CHECK(lz78::code_len(BitString::from_text("1011010100010")) == 21);
    CHECK_THROWS_AS(lz78::code_len(BitString()), DomainError);
}

TEST_CASE("LZ78 parse splits into growing phrases") {
    // 1 | 0 | 11 | 01 | 010 | 00 | 10
    const auto p = lz78::parse(BitString::from_text("1011010100010"));
    CHECK(p.complete_count == 7);
    CHECK_FALSE(p.has_partial);
    CHECK(p.reconstruct().to_string() == "1011010100010");

    const auto q = lz78::parse(BitString::from_text("0001"));
    CHECK(q.complete_count == 3);  // 0 | 00 | 1
    CHECK_FALSE(q.has_partial);
    const auto r = lz78::parse(BitString::from_text("000"));
    CHECK(r.complete_count == 2);  // 0 | 00
    const auto s = lz78::parse(BitString::from_text("0000"));
    CHECK(s.has_partial);          // 0 | 00 | 0
}

TEST_CASE("word-based length agrees with the string parser") {
    for (unsigned n = 1; n <= 12; ++n) {
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
            REQUIRE(lz78::code_len_word(w, n) == lz78::code_len(BitString::from_word(w, n)));
        }
    }
}

TEST_CASE("LZ78 code satisfies Kraft for each length") {
    for (unsigned n = 1; n <= 12; ++n) {
        double sum = 0.0;
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) sum += std::exp2(-double(lz78::code_len_word(w, n)));
        CHECK(sum <= 1.0);
    }
}

TEST_CASE("encode is delta(n) followed by the phrase stream and round-trips") {
    for (unsigned n = 1; n <= 10; ++n) {
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
            const auto x = BitString::from_word(w, n);
            const auto code = lz78::encode(x);
            REQUIRE(code.starts_with(codec::encode_nat(n)));
            REQUIRE(code.size() == codec::nat_length(n) + lz78::code_len(x));
            REQUIRE(lz78::decode(code) == x);
        }
    }
}

TEST_CASE("long random strings round-trip") {
    SplitMix64 rng(42);
    for (std::size_t len : {1000u, 4097u, 100000u}) {
        BitString x;
        for (std::size_t i = 0; i < len; ++i) x.push_back(rng.uniform() < 0.2);
        CHECK(lz78::decode(lz78::encode(x)) == x);
    }
}

TEST_CASE("the all-zero string compresses to about sqrt(2n) phrases") {
    const BitString zeros(4096);
    const auto len = lz78::code_len(zeros);
    CHECK(len < 700);
    CHECK(3 + codec::nat_length(4096) + len <= 1024);
}

TEST_CASE("malformed encodings are rejected") {
    const auto code = lz78::encode(BitString::from_text("1011010100010"));
    BitString trailing = code;
    trailing.push_back(true);
    CHECK_THROWS_AS(lz78::decode(trailing), DecodeError);
    CHECK_THROWS_AS(lz78::decode(code.slice(0, code.size() - 1)), DecodeError);
    // header promises n = 3 but the stream stops after the phrase "0"
    BitString bad;
    codec::append_nat(bad, 3);
    bad.append(BitString::from_text("0"));
    CHECK_THROWS_AS(lz78::decode(bad), DecodeError);
}
