#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eclab/bitstring.hpp"
#include "eclab/codec.hpp"

// LZ78 incremental parsing over {0,1} with an unbounded dictionary.
//
// Phrase j (1-based) is coded as its parent index in ceil(log2 j) bits
// followed by one literal bit. If the input ends in the middle of a match,
// the final partial phrase is coded as an index of ceil(log2(c+1)) bits with
// no literal, where c is the number of complete phrases. code_len() is the
// length of this phrase stream; the self-delimiting encode() additionally
// prefixes delta(n).
namespace eclab::lz78 {

struct Phrase {
    std::uint32_t parent;            // 0 is the empty root phrase
    std::optional<bool> extension;   // empty only for the final partial phrase
};

struct LZParse {
    std::vector<Phrase> phrases;
    std::size_t complete_count = 0;
    bool has_partial = false;

    /// Concatenation of all phrases.
    BitString reconstruct() const;
};

LZParse parse(const BitString& x);

/// Length in bits of the phrase stream of x. Throws DomainError if x is empty.
std::uint64_t code_len(const BitString& x);
std::uint64_t code_len(std::span<const std::uint8_t> symbols);

/// Same as code_len(BitString::from_word(word, length)) for length <= 64,
/// without allocating. Used by exhaustive enumeration.
std::uint64_t code_len_word(std::uint64_t word, unsigned length);

/// Phrase-stream length for c complete phrases (and an optional partial one).
std::uint64_t stream_length(std::uint64_t complete, bool partial);

/// delta(l(x)) ++ phrase stream; |encode(x)| = nat_length(l(x)) + code_len(x).
BitString encode(const BitString& x);
void append_encoding(BitString& out, const BitString& x);

/// Inverse of encode(). Rejects trailing bits.
BitString decode(const BitString& bits);
/// Decodes one encode() record starting at the reader position.
BitString read_encoding(codec::BitReader& reader);

}  // namespace eclab::lz78
