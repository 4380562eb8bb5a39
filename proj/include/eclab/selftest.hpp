#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "eclab/bitstring.hpp"
#include "eclab/complexity.hpp"
#include "eclab/rational.hpp"

// Exhaustive small-n invariant suites. Each suite counts checked cases and
// keeps the first failing case in enumeration order, so its result does not
// depend on the thread count.
namespace eclab::selftest {

struct SuiteResult {
    explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

    std::string name;
    std::uint64_t passed = 0;
    std::uint64_t total = 0;
    std::string failure;  // first failing case

    bool ok() const { return passed == total; }
    void record(bool ok, const std::function<std::string()>& describe);
    /// Appends `other`'s counts; keeps this suite's failure if it has one.
    void merge(const SuiteResult& other);
};

/// Natural-number code under test; `mutated()` is a negative control that
/// drops the last bit of every codeword longer than one bit.
struct CodecHooks {
    std::function<BitString(std::uint64_t)> encode_nat;
    std::function<std::uint64_t(const BitString&)> decode_nat;  // must consume every bit

    static CodecHooks reference();
    static CodecHooks mutated();
};

/// Budget grid {0, 2, ..., 32} and delta grid {0, 1/4, 1}.
std::vector<double> default_budgets();
std::vector<double> default_deltas();

SuiteResult codec_roundtrip(const CodecHooks& codec, std::uint64_t nat_limit);
/// Partial Kraft sums of the natural-number code over 1..nat_limit stay <= 1.
SuiteResult codec_kraft(const CodecHooks& codec, std::uint64_t nat_limit);

/// sum_{x in {0,1}^n} 2^-code_len(x) <= 1 for every 1 <= n <= max_n.
SuiteResult lz_kraft(unsigned max_n, unsigned threads = 0);
/// decode(encode(x)) = x for every x with 1 <= l(x) <= max_n.
SuiteResult lz_roundtrip(unsigned max_n, unsigned threads = 0);
/// `count` strings, lengths log-uniform on [1, max_len], half of them drawn
/// from Bernoulli(p) with p uniform on a 1/16 grid.
SuiteResult lz_random_roundtrip(std::size_t count, std::uint64_t max_len, std::uint64_t seed, unsigned threads = 0);

/// |T_{r,n}| <= 2^(r n) exactly, for every n <= max_n and r in `rates`.
SuiteResult size_bound(unsigned max_n, const std::vector<Rational>& rates, unsigned threads = 0);

/// Anti-monotonicity in Delta and in delta, the inequality
/// coarse_ec <= Delta + ec, and exact-mode witness validity, over every x with
/// 1 <= l(x) <= max_n.
std::vector<SuiteResult> complexity_invariants(unsigned max_n, const std::vector<double>& deltas,
                                               const std::vector<double>& budgets, unsigned threads = 0,
                                               const complexity::Engine& engine = complexity::default_engine());

/// Upper mode never undercuts exact mode (ec and coarse_ec), every x with l(x) <= max_n.
SuiteResult upper_soundness(unsigned max_n, const std::vector<double>& deltas, const std::vector<double>& budgets,
                            unsigned threads = 0, const complexity::Engine& engine = complexity::default_engine());

/// Engine and naive oracle agree on values and witnesses, every x with l(x) <= max_n.
SuiteResult oracle_equivalence(unsigned max_n, const std::vector<double>& deltas, const std::vector<double>& budgets,
                               unsigned threads = 0, const complexity::Engine& engine = complexity::default_engine());

/// Absolute tolerance of the coarse_ec <= Delta + ec check.
inline constexpr double kInequalityTolerance = 1e-6;

struct Options {
    unsigned codec_limit = 1u << 16;
    unsigned lz_n = 16;
    unsigned size_n = 16;
    unsigned invariant_n = 10;
    unsigned oracle_n = 8;
    unsigned threads = 0;
    bool mutate_codec = false;
};

/// One line per suite; returns true when every suite passed.
bool run(const Options& options, std::ostream& out);

}  // namespace eclab::selftest
