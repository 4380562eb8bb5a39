#include "eclab/lz78.hpp"

#include <algorithm>
#include <array>

#include "eclab/errors.hpp"

namespace eclab::lz78 {

namespace {

constexpr std::uint32_t kNone = 0;

// Binary trie over dictionary phrases; node id == phrase index, 0 is root.
class Trie {
public:
    explicit Trie(std::size_t expected) {
        children_.reserve(expected + 1);
        children_.push_back({kNone, kNone});
    }

    std::uint32_t child(std::uint32_t node, std::uint8_t bit) const { return children_[node][bit]; }

    std::uint32_t add(std::uint32_t parent, std::uint8_t bit) {
        const auto id = static_cast<std::uint32_t>(children_.size());
        children_[parent][bit] = id;
        children_.push_back({kNone, kNone});
        return id;
    }

private:
    std::vector<std::array<std::uint32_t, 2>> children_;
};

void require_nonempty(std::size_t n) {
    if (n == 0) throw DomainError("LZ78 parse of the empty string");
}

}  // namespace

BitString LZParse::reconstruct() const {
    // phrase_bits[j] is the content of phrase j, built from its parent.
    std::vector<BitString> content(1);
    BitString out;
    for (const Phrase& p : phrases) {
        BitString s = content.at(p.parent);
        if (p.extension) {
            s.push_back(*p.extension);
            content.push_back(s);
        }
        out.append(s);
    }
    return out;
}

LZParse parse(const BitString& x) {
    require_nonempty(x.size());
    LZParse result;
    Trie trie(x.size());
    std::uint32_t node = 0;
    for (std::uint8_t bit : x.symbols()) {
        const std::uint32_t next = trie.child(node, bit);
        if (next != kNone) {
            node = next;
            continue;
        }
        trie.add(node, bit);
        result.phrases.push_back({node, bit != 0});
        node = 0;
    }
    result.complete_count = result.phrases.size();
    if (node != 0) {
        result.phrases.push_back({node, std::nullopt});
        result.has_partial = true;
    }
    return result;
}

std::uint64_t stream_length(std::uint64_t complete, bool partial) {
    std::uint64_t bits = 0;
    for (std::uint64_t j = 1; j <= complete; ++j) bits += codec::ceil_log2(j) + 1;
    if (partial) bits += codec::ceil_log2(complete + 1);
    return bits;
}

std::uint64_t code_len(std::span<const std::uint8_t> symbols) {
    require_nonempty(symbols.size());
    Trie trie(symbols.size());
    std::uint32_t node = 0;
    std::uint64_t complete = 0;
    std::uint64_t bits = 0;
    for (std::uint8_t bit : symbols) {
        const std::uint32_t next = trie.child(node, bit);
        if (next != kNone) {
            node = next;
            continue;
        }
        trie.add(node, bit);
        ++complete;
        bits += codec::ceil_log2(complete) + 1;
        node = 0;
    }
    if (node != 0) bits += codec::ceil_log2(complete + 1);
    return bits;
}

std::uint64_t code_len(const BitString& x) {
    return code_len(x.symbols());
}

std::uint64_t code_len_word(std::uint64_t word, unsigned length) {
    require_nonempty(length);
    // At most `length` phrases, so a fixed table suffices.
    std::array<std::array<std::uint8_t, 2>, 65> children{};
    std::uint8_t nodes = 1;
    std::uint8_t node = 0;
    std::uint64_t complete = 0;
    std::uint64_t bits = 0;
    for (unsigned i = length; i-- > 0;) {
        const auto bit = static_cast<std::uint8_t>((word >> i) & 1);
        const std::uint8_t next = children[node][bit];
        if (next != 0) {
            node = next;
            continue;
        }
        children[node][bit] = nodes;
        children[nodes] = {0, 0};
        ++nodes;
        ++complete;
        bits += codec::ceil_log2(complete) + 1;
        node = 0;
    }
    if (node != 0) bits += codec::ceil_log2(complete + 1);
    return bits;
}

void append_encoding(BitString& out, const BitString& x) {
    const LZParse p = parse(x);
    codec::append_nat(out, x.size());
    std::uint64_t j = 0;
    for (const Phrase& phrase : p.phrases) {
        ++j;
        if (phrase.extension) {
            out.append_bits(phrase.parent, codec::ceil_log2(j));
            out.push_back(*phrase.extension);
        } else {
            out.append_bits(phrase.parent, codec::ceil_log2(p.complete_count + 1));
        }
    }
}

BitString encode(const BitString& x) {
    BitString out;
    append_encoding(out, x);
    return out;
}

BitString read_encoding(codec::BitReader& reader) {
    const std::uint64_t n = codec::read_nat(reader);
    BitString x;
    x.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, std::uint64_t{1} << 24)));
    // Each dictionary phrase is (offset into x, length); phrase 0 is empty.
    std::vector<std::pair<std::size_t, std::size_t>> dict{{0, 0}};
    while (x.size() < n) {
        const std::uint64_t j = dict.size();  // index of the phrase being read
        const std::uint64_t parent = reader.read_bits(codec::ceil_log2(j));
        if (parent >= j) {
            throw DecodeError("LZ78 phrase " + std::to_string(j) + " refers to unknown phrase " + std::to_string(parent));
        }
        const auto [offset, length] = dict[parent];
        const std::size_t remaining = n - x.size();
        if (length > remaining) throw DecodeError("LZ78 phrase overruns the stated length");
        if (parent != 0 && length == remaining) {
            // Final partial phrase: dictionary entry only, no literal.
            for (std::size_t i = 0; i < length; ++i) x.push_back(x[offset + i]);
            break;
        }
        const std::size_t start = x.size();
        for (std::size_t i = 0; i < length; ++i) x.push_back(x[offset + i]);
        x.push_back(reader.read_bit());
        dict.emplace_back(start, length + 1);
    }
    return x;
}

BitString decode(const BitString& bits) {
    codec::BitReader reader(bits);
    BitString x = read_encoding(reader);
    if (!reader.at_end()) throw DecodeError("trailing bits after LZ78 stream");
    if (x.empty()) throw DecodeError("LZ78 stream encodes an empty string");
    return x;
}

}  // namespace eclab::lz78
