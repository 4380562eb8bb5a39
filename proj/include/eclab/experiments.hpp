#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eclab/complexity.hpp"
#include "eclab/processes.hpp"
#include "eclab/rational.hpp"

// Seeded Monte Carlo drivers. Sample i of every run uses the per-sample seed
// stream_seed(seed, i) at every n, so the paths for increasing n are nested
// prefixes of one another; results are ordered by (n, sample) and do not
// depend on the thread count.
namespace eclab::complexity {

struct SweepConfig {
    double eps = 0.1;
    double delta = 0.1;
    std::vector<std::uint64_t> n_list;
    std::size_t samples = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct SweepRow {
    std::uint64_t n;
    std::size_t sample;
    std::uint64_t seed;
    std::size_t component;
    Rational r;                 // smallest grid r >= the component's entropy rate
    bool member;                // x in T_{r,n}
    double sigma_hat;           // desc_len(UniformTypical(r, n)) + r n
    bool budget_satisfied;      // sigma_hat <= khat + eps n
    ComplexityReport report;    // upper mode, Delta = eps n
};

struct SweepAggregate {
    std::uint64_t n;
    double fraction_budget_satisfied;
    double fraction_member;
    double median_ec_upper;     // +inf when more than half the domains are empty
    double reference;           // |delta(n)| + |code(r)| + 3, maximized over components
    double bound;               // log2 n + 2 log2 log2 n + C_scheme
    std::uint64_t c_scheme;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepAggregate> aggregates;
};

/// Throws DomainError when a component's entropy rate exceeds the grid maximum.
Rational grid_rate_above(const std::vector<Rational>& grid, double rate);

SweepResult theorem1_sweep(const processes::ProcessModel& model, const SweepConfig& config,
                           const Engine& engine = default_engine());

/// ell_LZ(x) / n for `samples` paths of length n.
std::vector<double> lz_rates(const processes::ProcessModel& model, std::uint64_t n, std::size_t samples,
                             std::uint64_t seed, unsigned threads = 0);

struct Classification {
    std::size_t component;  // generating component
    std::size_t predicted;  // component whose entropy rate is nearest to ell_LZ(x) / n
    double rate;
};

std::vector<Classification> classify_components(const processes::ProcessModel& model, std::uint64_t n,
                                                std::size_t samples, std::uint64_t seed, unsigned threads = 0);

/// Median; empty input gives NaN.
double median(std::vector<double> values);

}  // namespace eclab::complexity
