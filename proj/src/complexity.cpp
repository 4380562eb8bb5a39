#include "eclab/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <tuple>

#include "eclab/codec.hpp"
#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/parallel.hpp"

namespace eclab::complexity {

using ensembles::kComparisonSlack;
using ensembles::TransitionCounts;

namespace {

constexpr unsigned kScanMaxLength = 16;

struct Triple {
    std::uint64_t a0 = 0, a1 = 0, q = 0;
};

// Best member of one Markov precision class for one string. Members of a class
// share desc_len, so within the class the minimizers of total_info and of the
// coarse objective are found by value alone (first in (a0, a1, q) order, which
// is serialization order).
struct MarkovKhat {
    std::uint64_t bits = 0;
    Triple arg;
};

struct MarkovTypical {
    bool any = false;
    Triple ec_arg;
    double ec_entropy = 0.0;
    Triple coarse_arg;
    double coarse_entropy = 0.0;
};

std::vector<double> cost_table(unsigned m) {
    const std::uint64_t full = std::uint64_t{1} << m;
    std::vector<double> cost(full + 1, 0.0);
    for (std::uint64_t a = 1; a < full; ++a) cost[a] = ensembles::quantized_cost(m, a);
    return cost;
}

const std::vector<double>& costs(unsigned m) {
    static const auto tables = [] {
        std::vector<std::vector<double>> t(ensembles::kMaxPrecision + 1);
        for (unsigned k = 1; k <= 16; ++k) t[k] = cost_table(k);
        return t;
    }();
    if (m >= tables.size() || tables[m].empty()) throw DomainError("Markov precision above 16 is not tabulated");
    return tables[m];
}

double surrogate_entropy(const Rational& r, std::uint64_t n) {
    return static_cast<double>(r.num()) * static_cast<double>(n) / static_cast<double>(r.den());
}

}  // namespace

std::string_view mode_name(Mode mode) {
    return mode == Mode::Exact ? "exact" : "upper";
}

std::vector<Rational> default_r_grid() {
    std::vector<Rational> grid;
    for (std::uint64_t k = 1; k <= 64; ++k) grid.emplace_back(k, 64);
    for (std::uint64_t k = 9; k <= 16; ++k) grid.emplace_back(k, 8);
    return grid;
}

bool Constraint::admits(const Ensemble& e) const {
    if (!allows(e.tag())) return false;
    if (const auto* p = std::get_if<ensembles::IIDParams>(&e.params())) return allows_precision(p->m);
    if (const auto* p = std::get_if<ensembles::MarkovParams>(&e.params())) return allows_precision(p->m);
    if (const auto* p = std::get_if<ensembles::UniformTypicalParams>(&e.params())) return allows_rate(p->r);
    return true;
}

struct Engine::Profile {
    const BitString* x;
    std::uint64_t n;
    std::uint64_t ones;
    std::uint64_t lz_len;
    TransitionCounts counts;
};

struct Engine::Candidate {
    Candidate(Tag t, std::uint64_t d, double h, unsigned precision = 0, Triple p = {}, Rational rate = {})
        : tag(t), desc_len(d), entropy(h), m(precision), params(p), r(rate) {}

    Tag tag;
    std::uint64_t desc_len;
    double entropy;  // exact, or r n for an unresolved UniformTypical
    unsigned m;
    Triple params;  // IID uses params.a0
    Rational r;

    double sigma() const { return entropy + static_cast<double>(desc_len); }
    double objective() const { return 2.0 * static_cast<double>(desc_len) + entropy; }
};

struct Engine::Caches {
    using KhatKey = std::tuple<TransitionCounts, unsigned>;
    using TypicalKey = std::tuple<TransitionCounts, unsigned, std::uint64_t>;

    std::mutex mutex;
    std::map<KhatKey, MarkovKhat> markov_khat;
    std::map<TypicalKey, MarkovTypical> markov_typical;
    std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const std::vector<double>>> markov_entropy;

    std::shared_ptr<const std::vector<double>> entropy_table(std::uint64_t n, unsigned m) {
        {
            std::lock_guard lock(mutex);
            if (auto it = markov_entropy.find({n, m}); it != markov_entropy.end()) return it->second;
        }
        const std::uint64_t k = (std::uint64_t{1} << m) - 1;
        auto table = std::make_shared<std::vector<double>>(k * k * k);
        std::size_t i = 0;
        for (std::uint64_t a0 = 1; a0 <= k; ++a0) {
            for (std::uint64_t a1 = 1; a1 <= k; ++a1) {
                for (std::uint64_t q = 1; q <= k; ++q) (*table)[i++] = ensembles::markov_entropy(n, m, a0, a1, q);
            }
        }
        std::lock_guard lock(mutex);
        return markov_entropy.try_emplace({n, m}, std::move(table)).first->second;
    }

    MarkovKhat khat(const TransitionCounts& c, unsigned m) {
        const KhatKey key{c, m};
        {
            std::lock_guard lock(mutex);
            if (auto it = markov_khat.find(key); it != markov_khat.end()) return it->second;
        }
        const auto& cost = costs(m);
        const std::uint64_t full = std::uint64_t{1} << m;
        MarkovKhat best{~std::uint64_t{0}, {}};
        for (std::uint64_t a0 = 1; a0 < full; ++a0) {
            const double t0 = static_cast<double>(c.c00) * cost[full - a0] + static_cast<double>(c.c01) * cost[a0];
            for (std::uint64_t a1 = 1; a1 < full; ++a1) {
                const double t1 = static_cast<double>(c.c10) * cost[a1] + static_cast<double>(c.c11) * cost[full - a1];
                for (std::uint64_t q = 1; q < full; ++q) {
                    const double init = c.first ? cost[q] : cost[full - q];
                    const std::uint64_t bits = ensembles::code_length_bits((init + t0) + t1);
                    if (bits < best.bits) best = {bits, {a0, a1, q}};
                }
            }
        }
        std::lock_guard lock(mutex);
        return markov_khat.try_emplace(key, best).first->second;
    }

    MarkovTypical typical(const TransitionCounts& c, std::uint64_t n, unsigned m, double delta) {
        const TypicalKey key{c, m, std::bit_cast<std::uint64_t>(delta)};
        {
            std::lock_guard lock(mutex);
            if (auto it = markov_typical.find(key); it != markov_typical.end()) return it->second;
        }
        const auto entropy = entropy_table(n, m);
        const auto& cost = costs(m);
        const std::uint64_t full = std::uint64_t{1} << m;
        const double d = static_cast<double>(ensembles::markov_desc_len(n, m));
        MarkovTypical best;
        double best_sigma = 0.0;
        double best_objective = 0.0;
        std::size_t i = 0;
        for (std::uint64_t a0 = 1; a0 < full; ++a0) {
            const double t0 = static_cast<double>(c.c00) * cost[full - a0] + static_cast<double>(c.c01) * cost[a0];
            for (std::uint64_t a1 = 1; a1 < full; ++a1) {
                const double t1 = static_cast<double>(c.c10) * cost[a1] + static_cast<double>(c.c11) * cost[full - a1];
                for (std::uint64_t q = 1; q < full; ++q, ++i) {
                    const double init = c.first ? cost[q] : cost[full - q];
                    const double h = (*entropy)[i];
                    if (!((init + t0) + t1 <= h * (1.0 + delta) + kComparisonSlack)) continue;
                    const double sigma = h + d;
                    const double objective = 2.0 * d + h;
                    if (!best.any || sigma < best_sigma) {
                        best_sigma = sigma;
                        best.ec_entropy = h;
                        best.ec_arg = {a0, a1, q};
                    }
                    if (!best.any || objective < best_objective) {
                        best_objective = objective;
                        best.coarse_entropy = h;
                        best.coarse_arg = {a0, a1, q};
                    }
                    best.any = true;
                }
            }
        }
        std::lock_guard lock(mutex);
        return markov_typical.try_emplace(key, best).first->second;
    }
};

Engine::Engine(FamilyConfig config) : config_(std::move(config)), caches_(std::make_unique<Caches>()) {
    if (config_.m_max > 16) throw DomainError("m_max above 16 is not supported");
    for (const auto& r : config_.r_grid) {
        if (r.is_zero()) throw DomainError("r grid entries must be positive");
    }
    std::sort(config_.r_grid.begin(), config_.r_grid.end());
    config_.r_grid.erase(std::unique(config_.r_grid.begin(), config_.r_grid.end()), config_.r_grid.end());
}

Engine::~Engine() = default;

Engine::Profile Engine::profile(const BitString& x) const {
    if (x.empty()) throw DomainError("complexity is defined for strings of length >= 1");
    return {&x, x.size(), x.count_ones(), lz78::code_len(x), TransitionCounts::of(x)};
}

void Engine::check_mode(const Profile& p, Mode mode) const {
    if (mode == Mode::Exact && p.n > config_.n_max) {
        throw ResourceError("exact mode needs n <= " + std::to_string(config_.n_max) + " (got n = " + std::to_string(p.n) +
                            "); use --mode upper");
    }
}

Ensemble Engine::materialize(const Profile& p, const Candidate& c) const {
    switch (c.tag) {
        case Tag::SingletonRaw: return Ensemble::singleton_raw(*p.x);
        case Tag::SingletonLZ: return Ensemble::singleton_lz(*p.x);
        case Tag::UniformAll: return Ensemble::uniform_all(p.n);
        case Tag::UniformTypical: return Ensemble::uniform_typical(typical_sets::TypicalSetSpec(c.r, p.n), config_.n_max);
        case Tag::IIDQuantized: return Ensemble::iid_quantized(p.n, c.m, c.params.a0);
        case Tag::MarkovQuantized: return Ensemble::markov_quantized(p.n, c.m, c.params.a0, c.params.a1, c.params.q);
    }
    throw DomainError("unknown ensemble tag");
}

KhatResult Engine::khat_of(const Profile& p) const {
    struct Entry {
        std::uint64_t cost;
        Candidate candidate;
    };
    std::vector<Entry> entries;
    const std::uint64_t header = ensembles::header_length(p.n);
    entries.push_back({header + p.n, Candidate(Tag::SingletonRaw, header + p.n, 0.0)});
    entries.push_back({header + p.lz_len, Candidate(Tag::SingletonLZ, header + p.lz_len, 0.0)});
    entries.push_back({header + p.n, Candidate(Tag::UniformAll, header, static_cast<double>(p.n))});
    for (const auto& r : config_.r_grid) {
        const typical_sets::TypicalSetSpec spec(r, p.n);
        if (!spec.admits_code_len(p.lz_len)) continue;
        const std::uint64_t d = ensembles::uniform_typical_desc_len(p.n, r);
        std::uint64_t bits = 0;
        double h = 0.0;
        if (p.n <= config_.n_max) {
            h = std::log2(static_cast<double>(typical_sets::cardinality(spec, config_.n_max)));
            bits = ensembles::code_length_bits(h);
        } else {
            h = surrogate_entropy(r, p.n);
            bits = spec.ceil_rn();
        }
        entries.push_back({d + bits, Candidate(Tag::UniformTypical, d, h, 0, {}, r)});
    }
    for (unsigned m = 1; m <= config_.m_max; ++m) {
        const std::uint64_t full = std::uint64_t{1} << m;
        std::uint64_t best_bits = ~std::uint64_t{0};
        std::uint64_t best_a = 0;
        for (std::uint64_t a = 1; a < full; ++a) {
            const std::uint64_t bits = ensembles::code_length_bits(ensembles::iid_neg_log2(p.n, p.ones, m, a));
            if (bits < best_bits) {
                best_bits = bits;
                best_a = a;
            }
        }
        const std::uint64_t d = ensembles::iid_desc_len(p.n, m);
        entries.push_back({d + best_bits, Candidate(Tag::IIDQuantized, d, 0.0, m, {best_a, 0, 0})});
    }
    for (unsigned m = 1; m <= config_.m_max; ++m) {
        const MarkovKhat mk = caches_->khat(p.counts, m);
        const std::uint64_t d = ensembles::markov_desc_len(p.n, m);
        entries.push_back({d + mk.bits, Candidate(Tag::MarkovQuantized, d, 0.0, m, mk.arg)});
    }

    std::size_t best = 0;
    std::optional<BitString> best_serial;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const auto& a = entries[i];
        const auto& b = entries[best];
        if (a.cost < b.cost) {
            best = i;
            best_serial.reset();
        } else if (a.cost == b.cost) {
            if (!best_serial) best_serial = materialize(p, b.candidate).serialize();
            BitString serial = materialize(p, a.candidate).serialize();
            if (serial < *best_serial) {
                best = i;
                best_serial = std::move(serial);
            }
        }
    }
    return {entries[best].cost, materialize(p, entries[best].candidate)};
}

std::vector<Engine::Candidate> Engine::typical_candidates(const Profile& p, double delta, Mode mode,
                                                          const std::optional<Constraint>& constraint) const {
    if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
    const auto allowed = [&](Tag t) { return !constraint || constraint->allows(t); };
    const auto allowed_m = [&](unsigned m) { return !constraint || constraint->allows_precision(m); };
    const auto typical = [&](double cost, double h) { return cost <= h * (1.0 + delta) + kComparisonSlack; };

    std::vector<Candidate> out;
    const std::uint64_t header = ensembles::header_length(p.n);
    if (allowed(Tag::SingletonRaw)) out.emplace_back(Tag::SingletonRaw, header + p.n, 0.0);
    if (allowed(Tag::SingletonLZ)) out.emplace_back(Tag::SingletonLZ, header + p.lz_len, 0.0);
    if (allowed(Tag::UniformAll)) out.emplace_back(Tag::UniformAll, header, static_cast<double>(p.n));
    if (allowed(Tag::UniformTypical)) {
        for (const auto& r : config_.r_grid) {
            if (constraint && !constraint->allows_rate(r)) continue;
            const typical_sets::TypicalSetSpec spec(r, p.n);
            if (!spec.admits_code_len(p.lz_len)) continue;
            double h = 0.0;
            if (mode == Mode::Upper) {
                h = surrogate_entropy(r, p.n);
            } else {
                h = std::log2(static_cast<double>(typical_sets::cardinality(spec, config_.n_max)));
                if (!typical(h, h)) continue;
            }
            out.emplace_back(Tag::UniformTypical, ensembles::uniform_typical_desc_len(p.n, r), h, 0, Triple{}, r);
        }
    }
    if (allowed(Tag::IIDQuantized)) {
        for (unsigned m = 1; m <= config_.m_max; ++m) {
            if (!allowed_m(m)) continue;
            const std::uint64_t full = std::uint64_t{1} << m;
            const std::uint64_t d = ensembles::iid_desc_len(p.n, m);
            const double dd = static_cast<double>(d);
            std::optional<Candidate> ec_rep;
            std::optional<Candidate> coarse_rep;
            for (std::uint64_t a = 1; a < full; ++a) {
                const double h = ensembles::iid_entropy(p.n, m, a);
                if (!typical(ensembles::iid_neg_log2(p.n, p.ones, m, a), h)) continue;
                const Candidate c(Tag::IIDQuantized, d, h, m, {a, 0, 0});
                if (!ec_rep || h + dd < ec_rep->sigma()) ec_rep = c;
                if (!coarse_rep || 2.0 * dd + h < coarse_rep->objective()) coarse_rep = c;
            }
            if (ec_rep) out.push_back(*ec_rep);
            if (coarse_rep && coarse_rep->params.a0 != ec_rep->params.a0) out.push_back(*coarse_rep);
        }
    }
    if (allowed(Tag::MarkovQuantized)) {
        for (unsigned m = 1; m <= config_.m_max; ++m) {
            if (!allowed_m(m)) continue;
            const MarkovTypical mt = caches_->typical(p.counts, p.n, m, delta);
            if (!mt.any) continue;
            const std::uint64_t d = ensembles::markov_desc_len(p.n, m);
            out.emplace_back(Tag::MarkovQuantized, d, mt.ec_entropy, m, mt.ec_arg);
            const auto& e = mt.ec_arg;
            const auto& c = mt.coarse_arg;
            if (std::tie(e.a0, e.a1, e.q) != std::tie(c.a0, c.a1, c.q)) {
                out.emplace_back(Tag::MarkovQuantized, d, mt.coarse_entropy, m, mt.coarse_arg);
            }
        }
    }
    return out;
}

CoarseResult Engine::coarse_of(const Profile& p, const std::vector<Candidate>& typical, std::uint64_t khat) const {
    // UniformAll is always typical, so `typical` is never empty without a constraint.
    std::size_t best = 0;
    std::optional<BitString> best_serial;
    for (std::size_t i = 1; i < typical.size(); ++i) {
        const auto& a = typical[i];
        const auto& b = typical[best];
        const double oa = a.objective();
        const double ob = b.objective();
        if (oa < ob || (oa == ob && a.desc_len < b.desc_len)) {
            best = i;
            best_serial.reset();
        } else if (oa == ob && a.desc_len == b.desc_len) {
            if (!best_serial) best_serial = materialize(p, b).serialize();
            BitString serial = materialize(p, a).serialize();
            if (serial < *best_serial) {
                best = i;
                best_serial = std::move(serial);
            }
        }
    }
    return {typical[best].objective() - static_cast<double>(khat), materialize(p, typical[best])};
}

KhatResult Engine::khat(const BitString& x) const {
    return khat_of(profile(x));
}

CoarseResult Engine::coarse_ec(const BitString& x, double delta, Mode mode) const {
    const Profile p = profile(x);
    check_mode(p, mode);
    const auto typical = typical_candidates(p, delta, mode, std::nullopt);
    return coarse_of(p, typical, khat_of(p).bits);
}

ComplexityReport Engine::ec(const BitString& x, const ComplexityQuery& query) const {
    const Profile p = profile(x);
    check_mode(p, query.mode);
    if (query.budget.eps && !(*query.budget.eps > 0.0)) throw DomainError("eps must be positive");
    const double budget = query.budget.resolve(p.n);
    if (!(budget >= 0.0)) throw DomainError("Delta must be nonnegative");

    ComplexityReport report;
    report.n = p.n;
    report.lz_len = p.lz_len;
    report.delta = query.delta;
    report.budget = budget;
    report.mode = query.mode;
    report.ec_is_upper_bound = query.mode == Mode::Upper;

    KhatResult k = khat_of(p);
    report.khat = k.bits;
    report.khat_witness = std::move(k.witness);

    const auto all = typical_candidates(p, query.delta, query.mode, std::nullopt);
    CoarseResult coarse = coarse_of(p, all, report.khat);
    report.coarse_ec = coarse.value;
    report.coarse_witness = std::move(coarse.witness);

    const auto typical = query.constraint ? typical_candidates(p, query.delta, query.mode, query.constraint) : all;
    std::optional<std::size_t> best;
    std::optional<BitString> best_serial;
    for (std::size_t i = 0; i < typical.size(); ++i) {
        const auto& a = typical[i];
        if (!within_budget(a.sigma(), report.khat, budget)) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = typical[*best];
        const double sa = a.sigma();
        const double sb = b.sigma();
        if (a.desc_len < b.desc_len || (a.desc_len == b.desc_len && sa < sb)) {
            best = i;
            best_serial.reset();
        } else if (a.desc_len == b.desc_len && sa == sb) {
            if (!best_serial) best_serial = materialize(p, b).serialize();
            BitString serial = materialize(p, a).serialize();
            if (serial < *best_serial) {
                best = i;
                best_serial = std::move(serial);
            }
        }
    }
    if (best) {
        report.ec = typical[*best].desc_len;
        report.witness = materialize(p, typical[*best]);
    }
    return report;
}

ScanResult Engine::max_coarse_scan(unsigned n, double delta, unsigned threads) const {
    if (n == 0) throw DomainError("scan length must be >= 1");
    if (n > kScanMaxLength) {
        throw ResourceError("max_coarse_scan enumerates 2^n strings; n <= " + std::to_string(kScanMaxLength) + " required");
    }
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<double> values(count);
    parallel_blocks(count, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            values[w] = coarse_ec(BitString::from_word(w, n), delta, Mode::Exact).value;
        }
    });
    ScanResult result;
    std::uint64_t arg = 0;
    for (std::uint64_t w = 0; w < count; ++w) {
        ++result.histogram[values[w]];
        if (values[w] > values[arg]) arg = w;
    }
    result.max_value = values[arg];
    result.argmax = BitString::from_word(arg, n);
    return result;
}

const Engine& default_engine() {
    static const Engine engine;
    return engine;
}

KhatResult khat(const BitString& x) {
    return default_engine().khat(x);
}

ComplexityReport ec(const BitString& x, const ComplexityQuery& query) {
    return default_engine().ec(x, query);
}

CoarseResult coarse_ec(const BitString& x, double delta, Mode mode) {
    return default_engine().coarse_ec(x, delta, mode);
}

ScanResult max_coarse_scan(unsigned n, double delta, unsigned threads) {
    return default_engine().max_coarse_scan(n, delta, threads);
}

double coarse_scheme_constant(unsigned n_hi) {
    double c = 0.0;
    for (std::uint64_t n = 1; n <= n_hi; ++n) {
        const double v = static_cast<double>(ensembles::header_length(n)) + static_cast<double>(n) / 2.0 -
                         std::log2(static_cast<double>(n));
        c = std::max(c, v);
    }
    return c;
}

std::uint64_t sweep_scheme_constant(const std::vector<Rational>& grid) {
    std::uint64_t longest = 0;
    for (const auto& r : grid) longest = std::max<std::uint64_t>(longest, codec::rational_length(r));
    return ensembles::kTagBits + 3 + longest;
}

}  // namespace eclab::complexity
