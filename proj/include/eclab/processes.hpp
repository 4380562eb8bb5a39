#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eclab/bitstring.hpp"
#include "eclab/rational.hpp"

// Stationary binary processes with finitely many parameters: Bernoulli,
// stationary first-order Markov, and finite mixtures of ergodic components.
namespace eclab::processes {

class ProcessModel;

struct Bernoulli {
    Rational p;  // P(X = 1)
};

/// Two-state chain started from its stationary distribution.
struct Markov {
    Rational p01;  // P(0 -> 1)
    Rational p10;  // P(1 -> 0)
};

struct Mixture {
    std::vector<Rational> weights;
    std::vector<ProcessModel> components;
};

struct WeightedComponent;

/// Immutable, validated process model. Construct through the factories or
/// parse(); invalid parameters throw DomainError.
class ProcessModel {
public:
    static ProcessModel bernoulli(Rational p);
    static ProcessModel markov(Rational p01, Rational p10);
    /// Symmetric chain flipping state with probability `flip`.
    static ProcessModel markov_flip(Rational flip) { return markov(flip, flip); }
    /// Transition matrix rows (row s = distribution of the successor of s).
    static ProcessModel markov_rows(const std::array<std::array<Rational, 2>, 2>& rows);
    /// Components must be ergodic (Bernoulli or irreducible aperiodic Markov);
    /// weights positive and summing to exactly 1.
    static ProcessModel mixture(std::vector<Rational> weights, std::vector<ProcessModel> components);

    /// Inline form, e.g. "bernoulli:p=3/10", "markov:flip=1/10",
    /// "markov:p01=1/5,p10=3/5", "mixture:1/2@bernoulli:p=1/10;1/2@bernoulli:p=1/2",
    /// or a multi-line key/value document (see README).
    static ProcessModel parse(std::string_view text);

    const std::variant<Bernoulli, Markov, Mixture>& variant() const { return model_; }
    bool is_ergodic() const { return !std::holds_alternative<Mixture>(model_); }

    /// Canonical inline form; parse(to_string()) reproduces the model.
    std::string to_string() const;

private:
    explicit ProcessModel(std::variant<Bernoulli, Markov, Mixture> model) : model_(std::move(model)) {}

    std::variant<Bernoulli, Markov, Mixture> model_;
};

struct WeightedComponent {
    Rational weight;
    ProcessModel model;
};

using TransitionMatrix = std::array<std::array<double, 2>, 2>;

/// -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

/// pi with pi T = pi. Throws DomainError naming an absorbing state when the
/// chain is reducible, or when a row does not sum to 1.
std::array<double, 2> stationary_dist(const TransitionMatrix& t);

TransitionMatrix transition_matrix(const Markov& m);

/// Bits per symbol. Mixtures: weighted average of component rates.
double entropy_rate(const ProcessModel& m);

/// P^(n)([x]) for n = l(x) >= 1.
double block_prob(const ProcessModel& m, const BitString& x);

/// Ergodic decomposition; a singleton of weight 1 for ergodic models.
std::vector<WeightedComponent> components(const ProcessModel& m);

struct SamplePath {
    BitString bits;
    std::size_t component = 0;  // index into components(m)
};

/// Deterministic in (m, n, seed). A mixture draws its component once, then
/// the component emits all n symbols, so a shorter path with the same seed is
/// a prefix of a longer one.
SamplePath sample_path(const ProcessModel& m, std::size_t n, std::uint64_t seed);
BitString sample(const ProcessModel& m, std::size_t n, std::uint64_t seed);

}  // namespace eclab::processes
