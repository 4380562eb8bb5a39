#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "eclab/bitstring.hpp"
#include "eclab/codec.hpp"
#include "eclab/rational.hpp"
#include "eclab/typical_sets.hpp"

// The fixed family of computable ensembles. Each member is a distribution on
// {0,1}^n for one n, has an exactly computable Shannon entropy, and a
// prefix-free serialization whose length desc_len() stands in for the
// Kolmogorov complexity of the ensemble.
//
// Serialization: 3 tag bits, delta(n), then
//   SingletonRaw    x verbatim
//   SingletonLZ     LZ78 phrase stream of x
//   UniformAll      -
//   UniformTypical  delta(a) delta(b) for r = a/b
//   IIDQuantized    delta(m), a in m bits           (p = a / 2^m)
//   MarkovQuantized delta(m), a0, a1, q in m bits each
//                   (P(0->1) = a0/2^m, P(1->0) = a1/2^m, P(x_1 = 1) = q/2^m)
namespace eclab::ensembles {

enum class Tag : std::uint8_t {
    SingletonRaw = 0,
    SingletonLZ = 1,
    UniformAll = 2,
    UniformTypical = 3,
    IIDQuantized = 4,
    MarkovQuantized = 5,
};

inline constexpr unsigned kTagBits = 3;
inline constexpr unsigned kMaxPrecision = 62;

/// Absolute slack, toward acceptance, in the delta-typicality test and in the
/// total-information budget comparison.
inline constexpr double kComparisonSlack = 1e-9;

std::string_view tag_name(Tag tag);

struct SingletonRawParams {
    BitString x;
};
struct SingletonLZParams {
    BitString x;
    std::uint64_t lz_len;
};
struct UniformAllParams {
    std::uint64_t n;
};
struct UniformTypicalParams {
    Rational r;
    std::uint64_t n;
    std::optional<std::uint64_t> cardinality;  // unresolved when n > n_max
};
struct IIDParams {
    std::uint64_t n;
    unsigned m;
    std::uint64_t a;
};
struct MarkovParams {
    std::uint64_t n;
    unsigned m;
    std::uint64_t a0;
    std::uint64_t a1;
    std::uint64_t q;
};

using Params = std::variant<SingletonRawParams, SingletonLZParams, UniformAllParams, UniformTypicalParams, IIDParams,
                            MarkovParams>;

class Ensemble {
public:
    static Ensemble singleton_raw(BitString x);
    static Ensemble singleton_lz(BitString x);
    static Ensemble uniform_all(std::uint64_t n);
    /// Counts T_{r,n} when n <= n_max (DomainError if empty); otherwise the
    /// ensemble is unresolved and entropy()/prob() throw ResourceError.
    static Ensemble uniform_typical(const typical_sets::TypicalSetSpec& spec,
                                    unsigned n_max = typical_sets::kDefaultNMax);
    static Ensemble iid_quantized(std::uint64_t n, unsigned m, std::uint64_t a);
    static Ensemble markov_quantized(std::uint64_t n, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q);

    Tag tag() const { return static_cast<Tag>(params_.index()); }
    const Params& params() const { return params_; }
    /// Length of every string in the support.
    std::uint64_t length() const;
    bool has_exact_entropy() const;

    double prob(const BitString& x) const;
    /// -log2 prob(x); +infinity outside the support.
    double neg_log2_prob(const BitString& x) const;
    double entropy() const;
    std::uint64_t desc_len() const;
    double total_info() const { return entropy() + static_cast<double>(desc_len()); }

    BitString serialize() const;
    void append_serialization(BitString& out) const;

    /// "uniform-typ:r=1/2,n=16" etc.; parse_ensemble() inverts it.
    std::string to_string() const;
    /// The part of to_string() after the colon.
    std::string params_string() const;

    friend bool operator==(const Ensemble& lhs, const Ensemble& rhs) { return lhs.serialize() == rhs.serialize(); }

private:
    explicit Ensemble(Params p) : params_(std::move(p)) {}
    Params params_;
};

bool is_delta_typical(const Ensemble& e, const BitString& x, double delta);

/// Inverse of serialize(); rejects trailing bits. Malformed input throws DecodeError.
Ensemble decode_ensemble(const BitString& bits, unsigned n_max = typical_sets::kDefaultNMax);
Ensemble read_ensemble(codec::BitReader& reader, unsigned n_max = typical_sets::kDefaultNMax);

Ensemble parse_ensemble(std::string_view text, unsigned n_max = typical_sets::kDefaultNMax);

// Scalar kernels shared by Ensemble and the minimization engine so that both
// produce bit-identical values.

/// tag + delta(n): the part of desc_len() every member of length n pays.
std::uint64_t header_length(std::uint64_t n);
std::uint64_t iid_desc_len(std::uint64_t n, unsigned m);
std::uint64_t markov_desc_len(std::uint64_t n, unsigned m);
std::uint64_t uniform_typical_desc_len(std::uint64_t n, const Rational& r);

/// -log2(a / 2^m).
double quantized_cost(unsigned m, std::uint64_t a);

struct TransitionCounts {
    bool first = false;  // x_1
    std::uint64_t c00 = 0, c01 = 0, c10 = 0, c11 = 0;

    static TransitionCounts of(const BitString& x);
    friend auto operator<=>(const TransitionCounts&, const TransitionCounts&) = default;
};

double iid_neg_log2(std::uint64_t n, std::uint64_t ones, unsigned m, std::uint64_t a);
double iid_entropy(std::uint64_t n, unsigned m, std::uint64_t a);
double markov_neg_log2(const TransitionCounts& counts, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q);
/// H(X_1) + sum_{t<n} H(X_{t+1} | X_t), with P(X_t = 1) following the linear
/// marginal recursion summed in closed form.
double markov_entropy(std::uint64_t n, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q);

/// Integer code length for a probability with -log2 p = v: ceil(v), except
/// that values within kComparisonSlack of an integer snap to it.
std::uint64_t code_length_bits(double neg_log2);

}  // namespace eclab::ensembles
