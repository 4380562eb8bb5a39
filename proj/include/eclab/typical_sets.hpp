#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eclab/bitstring.hpp"
#include "eclab/processes.hpp"
#include "eclab/rational.hpp"

// T_{r,n} = { x in {0,1}^n : code_len(x) < r n }, the LZ78 threshold sets.
namespace eclab::typical_sets {

inline constexpr unsigned kDefaultNMax = 24;

class TypicalSetSpec {
public:
    /// r > 0, n >= 1; throws DomainError otherwise.
    TypicalSetSpec(Rational r, std::uint64_t n);

    const Rational& r() const { return r_; }
    std::uint64_t n() const { return n_; }

    /// code_len * b < a * n, exact.
    bool admits_code_len(std::uint64_t code_len) const;
    /// ceil(r n).
    std::uint64_t ceil_rn() const;

private:
    Rational r_;
    std::uint64_t n_;
};

/// Throws DomainError if l(x) != s.n().
bool contains(const TypicalSetSpec& s, const BitString& x);

/// Members of T_{r,n} in lexicographic order. Throws ResourceError if n > n_max.
std::vector<BitString> enumerate(const TypicalSetSpec& s, unsigned n_max = kDefaultNMax, unsigned threads = 0);

/// |T_{r,n}|, counted without materializing the set.
std::uint64_t cardinality(const TypicalSetSpec& s, unsigned n_max = kDefaultNMax, unsigned threads = 0);

/// histogram[L] = #{x in {0,1}^n : code_len(x) = L}. Memoized per n (thread-safe).
/// Every cardinality(r, n) is a prefix sum of this table.
const std::vector<std::uint64_t>& code_len_histogram(unsigned n, unsigned n_max = kDefaultNMax, unsigned threads = 0);

/// Fraction of `samples` sample paths x_1^n (path i seeded with
/// stream_seed(seed, i)) that fall in T_{r,n}.
double empirical_prob(const TypicalSetSpec& s, const processes::ProcessModel& m, std::size_t samples,
                      std::uint64_t seed, unsigned threads = 0);

}  // namespace eclab::typical_sets
