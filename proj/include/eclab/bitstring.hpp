#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eclab {

/// A finite string over {0,1}. One byte per symbol (0 or 1); symbol 0 is the
/// first (leftmost, most significant) bit.
///
/// Used both for data strings x and for codewords.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length, bool fill = false) : bits_(length, fill ? 1 : 0) {}

    /// ASCII '0'/'1'. Throws DomainError on any other character.
    static BitString from_text(std::string_view text);
    /// The low `length` bits of `word`, most significant first.
    static BitString from_word(std::uint64_t word, unsigned length);
    /// Hex digits carrying `length` bits, big-endian, trailing pad bits ignored.
    static BitString from_hex(std::string_view hex, std::size_t length);
    /// Inverse of pack().
    static BitString unpack(std::span<const std::uint8_t> bytes, std::size_t length);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    std::span<const std::uint8_t> symbols() const { return bits_; }

    void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
    void append(const BitString& other);
    /// Appends the low `width` bits of `value`, most significant first.
    void append_bits(std::uint64_t value, unsigned width);
    void reserve(std::size_t n) { bits_.reserve(n); }

    std::size_t count_ones() const;
    BitString slice(std::size_t offset, std::size_t length) const;
    bool starts_with(const BitString& prefix) const;

    std::string to_string() const;
    std::string to_hex() const;
    /// Big-endian packing; the final partial byte is zero padded.
    std::vector<std::uint8_t> pack() const;

    friend bool operator==(const BitString&, const BitString&) = default;
    /// Lexicographic on symbols; a proper prefix sorts first.
    friend std::strong_ordering operator<=>(const BitString& lhs, const BitString& rhs) {
        return lhs.bits_ <=> rhs.bits_;
    }

private:
    std::vector<std::uint8_t> bits_;
};

using BinaryString = BitString;

}  // namespace eclab
