#include "eclab/bitstring.hpp"

#include <algorithm>

#include "eclab/errors.hpp"

namespace eclab {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString BitString::from_text(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw DomainError(std::string("bit string contains '") + c + "' (only '0' and '1' allowed)");
        }
        out.bits_.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

BitString BitString::from_word(std::uint64_t word, unsigned length) {
    BitString out;
    out.append_bits(word, length);
    return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t length) {
    if (hex.size() * 4 < length) {
        throw DomainError("hex string carries fewer than " + std::to_string(length) + " bits");
    }
    BitString out;
    out.bits_.reserve(length);
    for (char c : hex) {
        const int v = hex_value(c);
        if (v < 0) throw DomainError(std::string("invalid hex digit '") + c + "'");
        for (int b = 3; b >= 0 && out.size() < length; --b) out.push_back(((v >> b) & 1) != 0);
    }
    return out;
}

BitString BitString::unpack(std::span<const std::uint8_t> bytes, std::size_t length) {
    if (bytes.size() * 8 < length) throw DecodeError("packed buffer shorter than stated bit length");
    BitString out;
    out.bits_.resize(length);
    for (std::size_t i = 0; i < length; ++i) out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return out;
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1));
}

std::size_t BitString::count_ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                     bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
    return out;
}

bool BitString::starts_with(const BitString& prefix) const {
    return prefix.size() <= size() && std::equal(prefix.bits_.begin(), prefix.bits_.end(), bits_.begin());
}

std::string BitString::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = bits_[i] ? '1' : '0';
    return out;
}

std::string BitString::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits_.size() + 3) / 4);
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4; ++j) v = (v << 1) | (i + j < bits_.size() ? bits_[i + j] : 0);
        out.push_back(kDigits[v]);
    }
    return out;
}

std::vector<std::uint8_t> BitString::pack() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

}  // namespace eclab
