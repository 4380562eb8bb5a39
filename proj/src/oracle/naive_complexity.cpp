#include "eclab/oracle/naive_complexity.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "eclab/errors.hpp"

namespace eclab::oracle {

using ensembles::kComparisonSlack;

namespace {

// Calls visit(e) for every member of the candidate family of length l(x).
template <class Visit>
void for_each_member(const BitString& x, const FamilyConfig& config, Visit&& visit) {
    const std::uint64_t n = x.size();
    visit(Ensemble::singleton_raw(x));
    visit(Ensemble::singleton_lz(x));
    visit(Ensemble::uniform_all(n));
    for (const auto& r : config.r_grid) {
        std::optional<Ensemble> e;
        try {
            e = Ensemble::uniform_typical(typical_sets::TypicalSetSpec(r, n), config.n_max);
        } catch (const DomainError&) {
            // T_{r,n} is empty, so it cannot contain x
        }
        if (e) visit(std::move(*e));
    }
    for (unsigned m = 1; m <= config.m_max; ++m) {
        const std::uint64_t full = std::uint64_t{1} << m;
        for (std::uint64_t a = 1; a < full; ++a) visit(Ensemble::iid_quantized(n, m, a));
    }
    for (unsigned m = 1; m <= config.m_max; ++m) {
        const std::uint64_t full = std::uint64_t{1} << m;
        for (std::uint64_t a0 = 1; a0 < full; ++a0) {
            for (std::uint64_t a1 = 1; a1 < full; ++a1) {
                for (std::uint64_t q = 1; q < full; ++q) visit(Ensemble::markov_quantized(n, m, a0, a1, q));
            }
        }
    }
}

}  // namespace

std::vector<Ensemble> family(const BitString& x, const FamilyConfig& config) {
    std::vector<Ensemble> positive;
    for_each_member(x, config, [&](Ensemble e) {
        if (std::isfinite(e.neg_log2_prob(x))) positive.push_back(std::move(e));
    });
    return positive;
}

NaiveOracle::NaiveOracle(const BitString& x, const FamilyConfig& config)
    : x_(x), khat_{0, Ensemble::uniform_all(std::max<std::size_t>(x.size(), 1))} {
    if (x.empty()) throw DomainError("complexity is defined for strings of length >= 1");
    if (x.size() > config.n_max) throw ResourceError("the naive oracle needs n <= n_max");
    std::size_t bound = 3 + config.r_grid.size();
    for (unsigned m = 1; m <= config.m_max; ++m) {
        const std::size_t k = (std::size_t{1} << m) - 1;
        bound += k + k * k * k;
    }
    members_.reserve(bound);
    for_each_member(x, config, [&](Ensemble e) {
        const double cost = e.neg_log2_prob(x);
        if (!std::isfinite(cost)) return;
        const double h = e.entropy();
        const std::uint64_t d = e.desc_len();
        // total_info() = entropy() + desc_len(), without re-evaluating the entropy
        const double sigma = h + static_cast<double>(d);
        members_.push_back({std::move(e), cost, h, d, sigma});
    });

    const Member* best = nullptr;
    std::uint64_t best_cost = 0;
    for (const auto& m : members_) {
        const std::uint64_t cost = m.desc_len + ensembles::code_length_bits(m.neg_log2);
        if (best == nullptr || cost < best_cost || (cost == best_cost && m.e.serialize() < best->e.serialize())) {
            best = &m;
            best_cost = cost;
        }
    }
    khat_ = {best_cost, best->e};
}

bool NaiveOracle::typical(const Member& m, double delta) const {
    if (!std::isfinite(m.neg_log2)) return false;
    return m.neg_log2 <= m.entropy * (1.0 + delta) + kComparisonSlack;
}

std::vector<std::optional<EcResult>> NaiveOracle::ec(double delta, std::span<const double> budgets,
                                                     const std::optional<Constraint>& constraint) const {
    // ec is lexicographically minimal (desc_len, total_info, serialization).
    const auto less = [](const Member& a, const Member& b) {
        if (a.desc_len != b.desc_len) return a.desc_len < b.desc_len;
        if (a.total_info != b.total_info) return a.total_info < b.total_info;
        return a.e.serialize() < b.e.serialize();
    };
    std::vector<const Member*> best(budgets.size(), nullptr);
    for (const auto& m : members_) {
        if (constraint && !constraint->admits(m.e)) continue;
        if (!typical(m, delta)) continue;
        for (std::size_t j = 0; j < budgets.size(); ++j) {
            if (best[j] != nullptr && m.desc_len > best[j]->desc_len) continue;
            if (!complexity::within_budget(m.total_info, khat_.bits, budgets[j])) continue;
            if (best[j] == nullptr || less(m, *best[j])) best[j] = &m;
        }
    }
    std::vector<std::optional<EcResult>> out;
    for (const Member* b : best) {
        if (b == nullptr) {
            out.emplace_back();
        } else {
            out.push_back(EcResult{b->desc_len, b->e});
        }
    }
    return out;
}

std::optional<EcResult> NaiveOracle::ec(double delta, double budget, const std::optional<Constraint>& constraint) const {
    return ec(delta, std::span<const double>(&budget, 1), constraint).front();
}

CoarseResult NaiveOracle::coarse_ec(double delta) const {
    const Member* best = nullptr;
    double best_objective = std::numeric_limits<double>::infinity();
    for (const auto& m : members_) {
        if (!typical(m, delta)) continue;
        const double objective = 2.0 * static_cast<double>(m.desc_len) + m.entropy;
        if (best == nullptr || objective < best_objective ||
            (objective == best_objective &&
             (m.desc_len < best->desc_len || (m.desc_len == best->desc_len && m.e.serialize() < best->e.serialize())))) {
            best = &m;
            best_objective = objective;
        }
    }
    return {best_objective - static_cast<double>(khat_.bits), best->e};
}

}  // namespace eclab::oracle
