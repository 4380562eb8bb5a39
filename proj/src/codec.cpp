#include "eclab/codec.hpp"

#include <bit>
#include <numeric>

#include "eclab/errors.hpp"

namespace eclab::codec {

bool BitReader::read_bit() {
    if (pos_ >= bits_.size()) throw DecodeError("truncated bit stream");
    return bits_[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned width) {
    if (remaining() < width) throw DecodeError("truncated bit stream");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(bits_[pos_++]);
    return v;
}

unsigned floor_log2(std::uint64_t n) {
    return static_cast<unsigned>(std::bit_width(n)) - 1;
}

unsigned ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1));
}

std::size_t nat_length(std::uint64_t n) {
    if (n == 0) throw DomainError("Elias-delta code is defined for n >= 1");
    const unsigned len = floor_log2(n) + 1;
    return 2 * floor_log2(len) + len;
}

void append_nat(BitString& out, std::uint64_t n) {
    if (n == 0) throw DomainError("Elias-delta code is defined for n >= 1");
    // len = bit length of n; prefix = floor(log2 len) zeros, then len in
    // binary, then n without its leading 1.
    const unsigned len = floor_log2(n) + 1;
    const unsigned len_len = floor_log2(len);
    out.append_bits(0, len_len);
    out.append_bits(len, len_len + 1);
    out.append_bits(n, len - 1);
}

BitString encode_nat(std::uint64_t n) {
    BitString out;
    append_nat(out, n);
    return out;
}

std::uint64_t read_nat(BitReader& reader) {
    unsigned zeros = 0;
    while (!reader.read_bit()) {
        if (++zeros > 6) throw DecodeError("Elias-delta prefix too long for a 64-bit value");
    }
    // The leading 1 of len has been consumed.
    const std::uint64_t len = (std::uint64_t{1} << zeros) | reader.read_bits(zeros);
    if (len > 64) throw DecodeError("Elias-delta length field exceeds 64 bits");
    const auto width = static_cast<unsigned>(len - 1);
    const std::uint64_t high = width == 64 ? 0 : (std::uint64_t{1} << width);
    return high | reader.read_bits(width);
}

Decoded<std::uint64_t> decode_nat(const BitString& bits, std::size_t offset) {
    BitReader reader(bits, offset);
    const std::uint64_t n = read_nat(reader);
    return {n, reader.position() - offset};
}

std::size_t rational_length(const Rational& r) {
    if (r.is_zero()) throw DomainError("rational code requires a >= 1");
    return nat_length(r.num()) + nat_length(r.den());
}

void append_rational(BitString& out, const Rational& r) {
    if (r.is_zero()) throw DomainError("rational code requires a >= 1");
    append_nat(out, r.num());
    append_nat(out, r.den());
}

BitString encode_rational(const Rational& r) {
    BitString out;
    append_rational(out, r);
    return out;
}

Rational read_rational(BitReader& reader) {
    const std::uint64_t a = read_nat(reader);
    const std::uint64_t b = read_nat(reader);
    if (std::gcd(a, b) != 1) {
        throw DecodeError("rational " + std::to_string(a) + "/" + std::to_string(b) + " is not in lowest terms");
    }
    return Rational(a, b);
}

Decoded<Rational> decode_rational(const BitString& bits, std::size_t offset) {
    BitReader reader(bits, offset);
    Rational r = read_rational(reader);
    return {r, reader.position() - offset};
}

}  // namespace eclab::codec
