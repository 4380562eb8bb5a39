#pragma once

#include <cstddef>
#include <cstdint>

#include "eclab/bitstring.hpp"
#include "eclab/rational.hpp"

// Prefix-free codes for naturals (Elias-delta) and positive rationals. Every
// description length reported elsewhere in eclab is a sum of these lengths
// plus fixed-width fields.
namespace eclab::codec {

template <class T>
struct Decoded {
    T value;
    std::size_t consumed;  // bits read
};

/// Sequential reader over a bit string. Throws DecodeError when reading past
/// the end.
class BitReader {
public:
    explicit BitReader(const BitString& bits, std::size_t offset = 0) : bits_(bits), pos_(offset) {}

    bool read_bit();
    std::uint64_t read_bits(unsigned width);
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_.size() - pos_; }
    bool at_end() const { return pos_ == bits_.size(); }

private:
    const BitString& bits_;
    std::size_t pos_;
};

/// floor(log2 n) for n >= 1.
unsigned floor_log2(std::uint64_t n);
/// ceil(log2 n) for n >= 1; 0 for n = 1.
unsigned ceil_log2(std::uint64_t n);

/// |delta(n)| = floor(log2 n) + 2 floor(log2(floor(log2 n) + 1)) + 1.
std::size_t nat_length(std::uint64_t n);

/// Elias-delta codeword of n >= 1. Throws DomainError for n = 0.
BitString encode_nat(std::uint64_t n);
void append_nat(BitString& out, std::uint64_t n);
std::uint64_t read_nat(BitReader& reader);
Decoded<std::uint64_t> decode_nat(const BitString& bits, std::size_t offset = 0);

/// delta(a) ++ delta(b) for a/b in lowest terms with a, b >= 1.
std::size_t rational_length(const Rational& r);
BitString encode_rational(const Rational& r);
void append_rational(BitString& out, const Rational& r);
/// Rejects a decoded pair that is not in lowest terms.
Rational read_rational(BitReader& reader);
Decoded<Rational> decode_rational(const BitString& bits, std::size_t offset = 0);

}  // namespace eclab::codec
