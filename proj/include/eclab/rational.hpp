#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace eclab {

/// Nonnegative rational kept in lowest terms. Used for every user-facing
/// parameter (rates, probabilities, weights) so that thresholds are compared
/// exactly.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::uint64_t num, std::uint64_t den);

    /// Parses "a/b" or "a". Throws DomainError on anything else.
    static Rational parse(std::string_view text);

    std::uint64_t num() const { return num_; }
    std::uint64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }

    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

    friend Rational operator+(const Rational& lhs, const Rational& rhs);
    friend Rational operator-(const Rational& lhs, const Rational& rhs);  // requires lhs >= rhs

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
};

}  // namespace eclab
