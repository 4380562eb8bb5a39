#include "eclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eclab/codec.hpp"
#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/parallel.hpp"
#include "eclab/rng.hpp"

namespace eclab::complexity {

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return values[mid - 1] == values[mid] ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

Rational grid_rate_above(const std::vector<Rational>& grid, double rate) {
    std::optional<Rational> best;
    for (const auto& r : grid) {
        if (r.value() >= rate && (!best || r < *best)) best = r;
    }
    if (!best) throw DomainError("entropy rate " + std::to_string(rate) + " exceeds every grid rate");
    return *best;
}

SweepResult theorem1_sweep(const processes::ProcessModel& model, const SweepConfig& config, const Engine& engine) {
    if (!(config.eps > 0.0)) throw DomainError("eps must be positive");
    if (!(config.delta >= 0.0)) throw DomainError("delta must be nonnegative");
    if (config.samples == 0) throw DomainError("samples must be >= 1");
    if (config.n_list.empty()) throw DomainError("n list is empty");
    for (std::size_t i = 0; i < config.n_list.size(); ++i) {
        if (config.n_list[i] == 0) throw DomainError("n must be >= 1");
        if (i > 0 && config.n_list[i] <= config.n_list[i - 1]) throw DomainError("n list must be strictly ascending");
    }

    const auto parts = processes::components(model);
    std::vector<Rational> rates;
    for (const auto& c : parts) rates.push_back(grid_rate_above(engine.config().r_grid, processes::entropy_rate(c.model)));
    const std::uint64_t c_scheme = sweep_scheme_constant(engine.config().r_grid);

    const std::size_t cells = config.n_list.size() * config.samples;
    std::vector<std::optional<SweepRow>> slots(cells);
    parallel_for(cells, config.threads, [&](std::size_t cell) {
        const std::uint64_t n = config.n_list[cell / config.samples];
        const std::size_t sample = cell % config.samples;
        const std::uint64_t seed = stream_seed(config.seed, sample);
        const auto path = processes::sample_path(model, n, seed);
        ComplexityQuery query;
        query.delta = config.delta;
        query.budget = Budget::per_symbol(config.eps);
        query.mode = Mode::Upper;
        ComplexityReport report = engine.ec(path.bits, query);
        const Rational r = rates[path.component];
        const double sigma_hat = static_cast<double>(ensembles::uniform_typical_desc_len(n, r)) +
                                 static_cast<double>(r.num()) * static_cast<double>(n) / static_cast<double>(r.den());
        const bool member = typical_sets::TypicalSetSpec(r, n).admits_code_len(report.lz_len);
        const bool satisfied = within_budget(sigma_hat, report.khat, report.budget);
        slots[cell] = SweepRow{n, sample, seed, path.component, r, member, sigma_hat, satisfied, std::move(report)};
    });

    SweepResult result;
    result.rows.reserve(cells);
    for (auto& s : slots) result.rows.push_back(std::move(*s));

    for (std::size_t k = 0; k < config.n_list.size(); ++k) {
        const std::uint64_t n = config.n_list[k];
        std::size_t satisfied = 0;
        std::size_t members = 0;
        std::vector<double> ec_values;
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto& row = result.rows[k * config.samples + s];
            satisfied += row.budget_satisfied;
            members += row.member;
            ec_values.push_back(row.report.ec ? static_cast<double>(*row.report.ec)
                                              : std::numeric_limits<double>::infinity());
        }
        double reference = 0.0;
        for (const auto& r : rates) {
            reference = std::max(reference, static_cast<double>(codec::nat_length(n) + codec::rational_length(r) + 3));
        }
        const double log_n = std::log2(static_cast<double>(n));
        const double loglog = n >= 2 ? std::log2(log_n) : 0.0;
        const auto total = static_cast<double>(config.samples);
        result.aggregates.push_back({n, static_cast<double>(satisfied) / total, static_cast<double>(members) / total,
                                     median(std::move(ec_values)), reference,
                                     log_n + 2.0 * loglog + static_cast<double>(c_scheme), c_scheme});
    }
    return result;
}

std::vector<double> lz_rates(const processes::ProcessModel& model, std::uint64_t n, std::size_t samples,
                             std::uint64_t seed, unsigned threads) {
    if (n == 0) throw DomainError("n must be >= 1");
    std::vector<double> rates(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        const BitString x = processes::sample(model, n, stream_seed(seed, i));
        rates[i] = static_cast<double>(lz78::code_len(x)) / static_cast<double>(n);
    });
    return rates;
}

std::vector<Classification> classify_components(const processes::ProcessModel& model, std::uint64_t n,
                                                std::size_t samples, std::uint64_t seed, unsigned threads) {
    if (n == 0) throw DomainError("n must be >= 1");
    const auto parts = processes::components(model);
    std::vector<double> h;
    for (const auto& c : parts) h.push_back(processes::entropy_rate(c.model));
    std::vector<Classification> out(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        const auto path = processes::sample_path(model, n, stream_seed(seed, i));
        const double rate = static_cast<double>(lz78::code_len(path.bits)) / static_cast<double>(n);
        std::size_t nearest = 0;
        for (std::size_t k = 1; k < h.size(); ++k) {
            if (std::abs(rate - h[k]) < std::abs(rate - h[nearest])) nearest = k;
        }
        out[i] = {path.component, nearest, rate};
    });
    return out;
}

}  // namespace eclab::complexity
