#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eclab/bitstring.hpp"
#include "eclab/ensembles.hpp"
#include "eclab/rational.hpp"
#include "eclab/typical_sets.hpp"

// Complexity quantities over the fixed ensemble family:
//
//   khat(x)          min over the family of desc_len(e) + ceil(-log2 e(x))
//   ec(x | delta, D) min desc_len(e) over e with e(x) > 0, e delta-typical for
//                    x, and total_info(e) <= khat(x) + D
//   coarse_ec(x)     min over delta-typical e of 2 desc_len(e) + H(e) - khat(x)
//
// Ties go to the smaller total_info (ec) or smaller desc_len (coarse_ec), then
// to the lexicographically smaller serialization.
//
// In upper mode the uniform distribution on T_{r,n} is charged r n instead of
// log2 |T_{r,n}|, which needs no enumeration and can only increase totals.
namespace eclab::complexity {

using ensembles::Ensemble;
using ensembles::Tag;

enum class Mode { Exact, Upper };

std::string_view mode_name(Mode mode);

/// {k/64 : 1 <= k <= 64} U {k/8 : 9 <= k <= 16}, lowest terms, ascending.
std::vector<Rational> default_r_grid();

struct FamilyConfig {
    std::vector<Rational> r_grid = default_r_grid();
    unsigned m_max = 6;
    unsigned n_max = typical_sets::kDefaultNMax;
};

/// Restricts the minimization domain to a tag subset and parameter ranges.
struct Constraint {
    std::uint8_t tag_mask = 0x3F;
    unsigned m_min = 1;
    unsigned m_max = ensembles::kMaxPrecision;
    std::optional<Rational> r_min;
    std::optional<Rational> r_max;

    bool allows(Tag tag) const { return (tag_mask >> static_cast<unsigned>(tag)) & 1u; }
    bool allows_precision(unsigned m) const { return m >= m_min && m <= m_max; }
    bool allows_rate(const Rational& r) const { return (!r_min || *r_min <= r) && (!r_max || r <= *r_max); }
    bool admits(const Ensemble& e) const;
};

/// Delta either fixed or eps * n.
struct Budget {
    double fixed = 0.0;
    std::optional<double> eps;

    static Budget absolute(double delta_bits) { return {delta_bits, std::nullopt}; }
    static Budget per_symbol(double eps) { return {0.0, eps}; }
    double resolve(std::uint64_t n) const { return eps ? *eps * static_cast<double>(n) : fixed; }
};

struct ComplexityQuery {
    double delta = 0.0;
    Budget budget;
    std::optional<Constraint> constraint;
    Mode mode = Mode::Exact;
};

/// total_info <= khat + Delta, with the shared comparison slack.
inline bool within_budget(double total_info, std::uint64_t khat, double budget) {
    return total_info <= static_cast<double>(khat) + budget + ensembles::kComparisonSlack;
}

struct KhatResult {
    std::uint64_t bits;
    Ensemble witness;
};

struct CoarseResult {
    double value;
    Ensemble witness;
};

struct ComplexityReport {
    std::uint64_t n = 0;
    std::uint64_t lz_len = 0;
    std::uint64_t khat = 0;
    std::optional<std::uint64_t> ec;  // nullopt: empty minimization domain
    bool ec_is_upper_bound = false;
    double coarse_ec = 0.0;
    std::optional<Ensemble> witness;  // minimizer of ec
    std::optional<Ensemble> coarse_witness;
    std::optional<Ensemble> khat_witness;
    double delta = 0.0;
    double budget = 0.0;  // resolved Delta
    Mode mode = Mode::Exact;
};

struct ScanResult {
    double max_value = 0.0;
    BitString argmax;  // lexicographically first maximizer
    std::map<double, std::uint64_t> histogram;
};

/// Minimization engine over one family configuration. Thread-safe; memoizes
/// per-length tables and per-statistic summaries internally.
class Engine {
public:
    explicit Engine(FamilyConfig config = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const FamilyConfig& config() const { return config_; }

    /// Uses |T_{r,n}| when n <= n_max and the surrogate ceil(r n) above.
    KhatResult khat(const BitString& x) const;

    /// Full report (khat, ec, coarse_ec). Exact mode requires n <= n_max.
    ComplexityReport ec(const BitString& x, const ComplexityQuery& query) const;

    CoarseResult coarse_ec(const BitString& x, double delta, Mode mode) const;

    /// Exhaustive exact coarse_ec over {0,1}^n, n <= 16.
    ScanResult max_coarse_scan(unsigned n, double delta, unsigned threads = 0) const;

private:
    struct Caches;
    struct Profile;
    struct Candidate;

    Profile profile(const BitString& x) const;
    void check_mode(const Profile& p, Mode mode) const;
    std::vector<Candidate> typical_candidates(const Profile& p, double delta, Mode mode,
                                              const std::optional<Constraint>& constraint) const;
    KhatResult khat_of(const Profile& p) const;
    Ensemble materialize(const Profile& p, const Candidate& c) const;
    CoarseResult coarse_of(const Profile& p, const std::vector<Candidate>& typical, std::uint64_t khat) const;

    FamilyConfig config_;
    std::unique_ptr<Caches> caches_;
};

/// Engine with the default configuration, shared process-wide.
const Engine& default_engine();

KhatResult khat(const BitString& x);
ComplexityReport ec(const BitString& x, const ComplexityQuery& query);
CoarseResult coarse_ec(const BitString& x, double delta, Mode mode = Mode::Exact);
ScanResult max_coarse_scan(unsigned n, double delta, unsigned threads = 0);

/// Constant c with max coarse_ec <= n/2 + log2 n + c for every n <= n_hi:
/// coarse_ec <= 2 desc_len(UniformAll) + n - khat and khat >= 3 + |delta(n)|,
/// so c = max_n (3 + |delta(n)| + n/2 - log2 n).
double coarse_scheme_constant(unsigned n_hi = 16);

/// Constant C with desc_len(UniformTypical(r, n)) <= log2 n + 2 log2 log2 n + C
/// for all n >= 2 and r in the grid: |delta(n)| <= log2 n + 2 log2 log2 n + 3,
/// so C = 3 tag bits + 3 + max_r |code(r)|.
std::uint64_t sweep_scheme_constant(const std::vector<Rational>& grid);

}  // namespace eclab::complexity
