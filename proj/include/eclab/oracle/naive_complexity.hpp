#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eclab/complexity.hpp"

// Reference implementation of khat, ec and coarse_ec: materializes every
// family member that gives x positive probability and evaluates the
// definitions through the public Ensemble interface. Nothing is shared across
// strings. Exact mode only.
namespace eclab::oracle {

using complexity::Constraint;
using complexity::CoarseResult;
using complexity::FamilyConfig;
using complexity::KhatResult;
using ensembles::Ensemble;

/// Every member of the candidate family with prob(e, x) > 0.
std::vector<Ensemble> family(const BitString& x, const FamilyConfig& config = {});

struct EcResult {
    std::uint64_t bits;
    Ensemble witness;
};

class NaiveOracle {
public:
    explicit NaiveOracle(const BitString& x, const FamilyConfig& config = {});

    std::size_t family_size() const { return members_.size(); }
    const KhatResult& khat() const { return khat_; }

    /// ec(x | delta, Delta) for each Delta in `budgets`; nullopt marks an empty domain.
    std::vector<std::optional<EcResult>> ec(double delta, std::span<const double> budgets,
                                            const std::optional<Constraint>& constraint = std::nullopt) const;
    std::optional<EcResult> ec(double delta, double budget, const std::optional<Constraint>& constraint = std::nullopt) const;

    CoarseResult coarse_ec(double delta) const;

private:
    struct Member {
        Ensemble e;
        double neg_log2;
        double entropy;
        std::uint64_t desc_len;
        double total_info;
    };

    bool typical(const Member& m, double delta) const;

    BitString x_;
    std::vector<Member> members_;
    KhatResult khat_;
};

}  // namespace eclab::oracle
