#include <doctest.h>

#include <cmath>

#include "eclab/bitstring.hpp"
#include "eclab/codec.hpp"
#include "eclab/errors.hpp"

using namespace eclab;

namespace {

// floor(log2 n) + 2 floor(log2(floor(log2 n) + 1)) + 1, evaluated independently.
std::size_t delta_length_formula(std::uint64_t n) {
    std::uint64_t l = 0;
    while ((n >> l) > 1) ++l;
    std::uint64_t ll = 0;
    while (((l + 1) >> ll) > 1) ++ll;
    return l + 2 * ll + 1;
}

}  // namespace

TEST_CASE("bit strings convert between text, words, hex and bytes") {
    const auto x = BitString::from_text("1011001");
    CHECK(x.size() == 7);
    CHECK(x.to_string() == "1011001");
    CHECK(x.count_ones() == 4);
    CHECK(BitString::from_word(0b1011001, 7) == x);
    CHECK(x.to_hex() == "b2");
    CHECK(BitString::from_hex("b2", 7) == x);
    CHECK(BitString::unpack(x.pack(), 7) == x);
    CHECK(x.slice(1, 3).to_string() == "011");
    CHECK(x.starts_with(BitString::from_text("101")));
    CHECK_THROWS_AS(BitString::from_text("10a"), DomainError);
}

TEST_CASE("bit strings order lexicographically with prefixes first") {
    CHECK(BitString::from_text("0") < BitString::from_text("00"));
    CHECK(BitString::from_text("011") < BitString::from_text("1"));
    CHECK(BitString::from_text("10") > BitString::from_text("011"));
}

TEST_CASE("Elias-delta codewords and lengths") {
    CHECK(codec::encode_nat(1).to_string() == "1");
    CHECK(codec::encode_nat(2).to_string() == "0100");
    CHECK(codec::nat_length(3) == 4);
    CHECK(codec::nat_length(4) == 5);
    CHECK(codec::nat_length(8) == 8);
    CHECK(codec::nat_length(16) == 9);
    CHECK(codec::nat_length(4096) == 19);
    CHECK(codec::nat_length(std::uint64_t{1} << 18) == 27);
    CHECK_THROWS_AS(codec::encode_nat(0), DomainError);
}

TEST_CASE("Elias-delta length matches the closed form and the encoder") {
    for (std::uint64_t n = 1; n <= (1u << 14); ++n) {
        REQUIRE(codec::nat_length(n) == delta_length_formula(n));
        REQUIRE(codec::encode_nat(n).size() == codec::nat_length(n));
    }
    for (std::uint64_t n : {std::uint64_t{1} << 40, (std::uint64_t{1} << 63) + 5, ~std::uint64_t{0}}) {
        CHECK(codec::encode_nat(n).size() == delta_length_formula(n));
    }
}

TEST_CASE("Elias-delta length bound used by the sweep constant") {
    // |delta(n)| <= log2 n + 2 log2 log2 n + 3 for n >= 2
    for (std::uint64_t n = 2; n <= (1u << 20); n = n < 64 ? n + 1 : n * 3 / 2) {
        const double log_n = std::log2(static_cast<double>(n));
        CHECK(static_cast<double>(codec::nat_length(n)) <= log_n + 2.0 * std::log2(log_n) + 3.0 + 1e-12);
    }
}

TEST_CASE("concatenated codewords decode back in order") {
    BitString stream;
    const std::uint64_t values[] = {1, 2, 3, 17, 1000, 1, 65536, ~std::uint64_t{0}};
    for (auto v : values) codec::append_nat(stream, v);
    codec::BitReader reader(stream);
    for (auto v : values) CHECK(codec::read_nat(reader) == v);
    CHECK(reader.at_end());
}

TEST_CASE("malformed naturals are rejected") {
    CHECK_THROWS_AS(codec::decode_nat(BitString::from_text("")), DecodeError);
    CHECK_THROWS_AS(codec::decode_nat(BitString::from_text("010")), DecodeError);
    CHECK_THROWS_AS(codec::decode_nat(BitString::from_text("0000000")), DecodeError);
    CHECK_THROWS_AS(codec::decode_nat(BitString::from_text("00000001000000")), DecodeError);
    const auto d = codec::decode_nat(BitString::from_text("01001"));
    CHECK(d.value == 2);
    CHECK(d.consumed == 4);
}

TEST_CASE("rationals are coded as numerator then denominator") {
    CHECK(codec::rational_length(Rational(1, 2)) == 5);
    CHECK(codec::encode_rational(Rational(1, 2)).to_string() == "10100");
    std::size_t longest = 0;
    for (std::uint64_t k = 1; k <= 64; ++k) longest = std::max(longest, codec::rational_length(Rational(k, 64)));
    for (std::uint64_t k = 9; k <= 16; ++k) longest = std::max(longest, codec::rational_length(Rational(k, 8)));
    CHECK(longest == 21);
    CHECK(codec::rational_length(Rational(63, 64)) == 21);
    for (std::uint64_t b = 1; b <= 40; ++b) {
        for (std::uint64_t a = 1; a <= 80; ++a) {
            const Rational r(a, b);
            const auto d = codec::decode_rational(codec::encode_rational(r));
            REQUIRE(d.value == r);
            REQUIRE(d.consumed == codec::rational_length(r));
        }
    }
}

TEST_CASE("rationals not in lowest terms do not decode") {
    BitString bits;
    codec::append_nat(bits, 2);
    codec::append_nat(bits, 4);
    CHECK_THROWS_AS(codec::decode_rational(bits), DecodeError);
}

TEST_CASE("rational parsing and arithmetic are exact") {
    CHECK(Rational::parse("6/8") == Rational(3, 4));
    CHECK(Rational::parse("2") == Rational(2, 1));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(34, 100));
    CHECK_THROWS_AS(Rational::parse("0.5"), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
}
