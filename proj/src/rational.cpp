#include "eclab/rational.hpp"

#include <charconv>
#include <numeric>

#include "eclab/errors.hpp"

namespace eclab {

namespace {

std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
    std::uint64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw DomainError("malformed rational '" + std::string(whole) + "' (expected a/b)");
    }
    return value;
}

}  // namespace

Rational::Rational(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_u64(text, text), 1);
    return Rational(parse_u64(text.substr(0, slash), text), parse_u64(text.substr(slash + 1), text));
}

std::string Rational::to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const unsigned __int128 l = static_cast<unsigned __int128>(lhs.num_) * rhs.den_;
    const unsigned __int128 r = static_cast<unsigned __int128>(rhs.num_) * lhs.den_;
    return l <=> r;
}

Rational operator+(const Rational& lhs, const Rational& rhs) {
    const std::uint64_t g = std::gcd(lhs.den_, rhs.den_);
    const std::uint64_t den = lhs.den_ / g * rhs.den_;
    return Rational(lhs.num_ * (rhs.den_ / g) + rhs.num_ * (lhs.den_ / g), den);
}

Rational operator-(const Rational& lhs, const Rational& rhs) {
    if (lhs < rhs) throw DomainError("negative rational difference");
    const std::uint64_t g = std::gcd(lhs.den_, rhs.den_);
    const std::uint64_t den = lhs.den_ / g * rhs.den_;
    return Rational(lhs.num_ * (rhs.den_ / g) - rhs.num_ * (lhs.den_ / g), den);
}

}  // namespace eclab
