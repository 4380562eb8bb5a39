#include <doctest.h>

#include <cmath>

#include "eclab/codec.hpp"
#include "eclab/complexity.hpp"
#include "eclab/errors.hpp"
#include "eclab/experiments.hpp"
#include "eclab/lz78.hpp"
#include "eclab/oracle/naive_complexity.hpp"
#include "eclab/processes.hpp"
#include "eclab/rng.hpp"

using namespace eclab;
using namespace eclab::complexity;

namespace {

ComplexityReport query(const BitString& x, double delta, double budget, Mode mode = Mode::Exact,
                       std::optional<Constraint> constraint = std::nullopt) {
    ComplexityQuery q;
    q.delta = delta;
    q.budget = Budget::absolute(budget);
    q.mode = mode;
    q.constraint = constraint;
    return ec(x, q);
}

std::uint64_t header(std::uint64_t n) {
    return 3 + codec::nat_length(n);
}

BitString random_string(std::uint64_t seed, std::size_t n) {
    SplitMix64 rng(seed);
    BitString x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(rng.next() >> 63);
    return x;
}

}  // namespace

TEST_CASE("values agree with an independent brute-force evaluation") {
    struct Case {
        const char* x;
        double delta;
        double budget;
        std::uint64_t khat;
        std::optional<std::uint64_t> ec;
        double coarse;
    };
    // khat, ec and coarse_ec frozen from a separate exhaustive evaluation of the family
    const Case cases[] = {
        {"0", 0.0, 16, 5, 4, 4.0},
        {"0000", 0.25, 4, 12, 8, 8.0},
        {"01101001", 0.0, 0, 19, 11, 11.0},
        {"01101001", 1.0, 32, 19, 11, 11.0},
        {"0000000000", 0.0, 16, 17, 11, 13.0},
        {"0000000000", 0.0, 0, 17, 13, 13.0},
        {"0110100110", 0.25, 4, 21, 11, 11.0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.x);
        const auto r = query(BitString::from_text(c.x), c.delta, c.budget);
        CHECK(r.khat == c.khat);
        CHECK(r.ec == c.ec);
        CHECK(r.coarse_ec == doctest::Approx(c.coarse).epsilon(1e-9));
    }
}

TEST_CASE("khat of a single symbol is the raw singleton") {
    const auto k = khat(BitString::from_text("0"));
    CHECK(k.bits == 5);
    CHECK(k.witness.tag() == Tag::SingletonRaw);
}

TEST_CASE("khat never exceeds the raw singleton cost") {
    for (unsigned n = 1; n <= 9; ++n) {
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); w += 3) {
            const auto x = BitString::from_word(w, n);
            REQUIRE(khat(x).bits <= header(n) + n);
        }
    }
}

TEST_CASE("the all-zero string has small khat") {
    const BitString zeros(4096);
    const auto k = khat(zeros);
    CHECK(k.bits <= 1024);
    CHECK(k.bits <= header(4096) + lz78::code_len(zeros));
}

TEST_CASE("witnesses satisfy the domain conditions") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = random_string(seed, 3 + seed % 12);
        for (double delta : {0.0, 0.25, 1.0}) {
            for (double budget : {0.0, 4.0, 32.0}) {
                const auto r = query(x, delta, budget);
                if (!r.ec) continue;
                CHECK(r.witness->prob(x) > 0.0);
                CHECK(ensembles::is_delta_typical(*r.witness, x, delta));
                CHECK(within_budget(r.witness->total_info(), r.khat, budget));
                CHECK(r.witness->desc_len() == *r.ec);
            }
        }
    }
}

TEST_CASE("a large budget admits the uniform ensemble") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto x = random_string(seed, 1 + seed % 14);
        const double budget = static_cast<double>(x.size() + header(x.size()));
        const auto r = query(x, 0.0, budget);
        REQUIRE(r.ec);
        CHECK(*r.ec <= header(x.size()));
        CHECK(r.coarse_ec <= 2.0 * header(x.size()) + x.size() - static_cast<double>(r.khat));
    }
}

TEST_CASE("coarse_ec is bounded by Delta plus ec") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto x = random_string(seed * 7, 2 + seed % 11);
        for (double budget : {0.0, 2.0, 8.0, 20.0}) {
            const auto r = query(x, 0.25, budget);
            if (r.ec) CHECK(r.coarse_ec <= budget + static_cast<double>(*r.ec) + 1e-6);
        }
    }
}

TEST_CASE("constraints restrict the witness") {
    const auto x = BitString::from_text("0000000000");
    Constraint no_uniform;
    no_uniform.tag_mask = 0x3F & ~(1u << static_cast<unsigned>(Tag::UniformAll));
    const auto r = query(x, 0.0, 16, Mode::Exact, no_uniform);
    REQUIRE(r.ec);
    CHECK(r.witness->tag() != Tag::UniformAll);
    CHECK(*r.ec >= query(x, 0.0, 16).ec.value());

    Constraint markov_only;
    markov_only.tag_mask = 1u << static_cast<unsigned>(Tag::MarkovQuantized);
    markov_only.m_min = 2;
    markov_only.m_max = 3;
    const auto m = query(x, 1.0, 32, Mode::Exact, markov_only);
    REQUIRE(m.ec);
    const auto& p = std::get<ensembles::MarkovParams>(m.witness->params());
    CHECK(p.m >= 2);
    CHECK(p.m <= 3);

    Constraint rates;
    rates.tag_mask = 1u << static_cast<unsigned>(Tag::UniformTypical);
    rates.r_max = Rational(1, 2);
    CHECK_FALSE(query(x, 0.0, 32, Mode::Exact, rates).ec);
}

TEST_CASE("empty domains are reported, not thrown") {
    // Only SingletonRaw is allowed and its total information exceeds khat.
    const auto x = BitString::from_text("0000000000");
    Constraint raw;
    raw.tag_mask = 1u << static_cast<unsigned>(Tag::SingletonRaw);
    const auto r = query(x, 0.0, 0, Mode::Exact, raw);
    CHECK_FALSE(r.ec);
    CHECK_FALSE(r.witness);
    CHECK(r.khat_witness);
}

TEST_CASE("upper mode is sound and works beyond the enumeration bound") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto x = random_string(seed * 13, 4 + seed % 10);
        for (double budget : {0.0, 6.0, 24.0}) {
            const auto exact = query(x, 0.25, budget);
            const auto upper = query(x, 0.25, budget, Mode::Upper);
            CHECK(upper.ec_is_upper_bound);
            if (upper.ec) {
                REQUIRE(exact.ec);
                CHECK(*upper.ec >= *exact.ec);
            }
            CHECK(upper.coarse_ec >= exact.coarse_ec - 1e-9);
        }
    }
    const auto long_x = processes::sample(processes::ProcessModel::parse("markov:flip=1/10"), 4096, 3);
    CHECK_THROWS_AS(query(long_x, 0.1, 400), ResourceError);
    const auto r = query(long_x, 0.1, 409.6, Mode::Upper);
    CHECK(r.ec);
    CHECK(r.khat < 4096);
}

TEST_CASE("exhaustive coarse scan") {
    const auto one = max_coarse_scan(1, 0.0);
    REQUIRE(one.histogram.size() == 1);
    CHECK(one.histogram.begin()->second == 2);
    CHECK(one.argmax.to_string() == "0");
    const auto six = max_coarse_scan(6, 0.25, 2);
    std::uint64_t total = 0;
    for (const auto& [value, count] : six.histogram) total += count;
    CHECK(total == 64);
    CHECK(six.max_value == six.histogram.rbegin()->first);
    CHECK(coarse_ec(six.argmax, 0.25).value == six.max_value);
    CHECK(six.max_value <= 3.0 + std::log2(6.0) + coarse_scheme_constant());
    CHECK_THROWS_AS(max_coarse_scan(17, 0.0), ResourceError);
}

TEST_CASE("scheme constants") {
    CHECK(sweep_scheme_constant(default_r_grid()) == 27);
    CHECK(coarse_scheme_constant(16) == 16.0);
    const auto grid = default_r_grid();
    CHECK(grid.size() == 72);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(grid.front() == Rational(1, 64));
    CHECK(grid.back() == Rational(2, 1));
}

TEST_CASE("a smaller family agrees with the naive evaluation") {
    FamilyConfig config;
    config.m_max = 2;
    config.r_grid = {Rational(1, 2), Rational(1, 1), Rational(3, 2), Rational(2, 1)};
    config.n_max = 12;
    const Engine engine(config);
    const double budgets[] = {0.0, 3.0, 10.0};
    for (unsigned n = 1; n <= 6; ++n) {
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
            const auto x = BitString::from_word(w, n);
            const oracle::NaiveOracle naive(x, config);
            REQUIRE(engine.khat(x).bits == naive.khat().bits);
            for (double delta : {0.0, 0.5}) {
                REQUIRE(engine.coarse_ec(x, delta, Mode::Exact).value == naive.coarse_ec(delta).value);
                const auto expected = naive.ec(delta, budgets);
                for (std::size_t b = 0; b < 3; ++b) {
                    ComplexityQuery q;
                    q.delta = delta;
                    q.budget = Budget::absolute(budgets[b]);
                    const auto r = engine.ec(x, q);
                    REQUIRE(r.ec.has_value() == expected[b].has_value());
                    if (r.ec) REQUIRE(*r.witness == expected[b]->witness);
                }
            }
        }
    }
}

TEST_CASE("query validation") {
    const auto x = BitString::from_text("0101");
    CHECK_THROWS_AS(query(x, -1.0, 0.0), DomainError);
    CHECK_THROWS_AS(query(x, 0.0, -1.0), DomainError);
    CHECK_THROWS_AS(khat(BitString()), DomainError);
    ComplexityQuery q;
    q.budget = Budget::per_symbol(0.0);
    CHECK_THROWS_AS(ec(x, q), DomainError);
    q.budget = Budget::per_symbol(0.5);
    CHECK(ec(x, q).budget == 2.0);
}

TEST_CASE("grid rate selection") {
    const auto grid = default_r_grid();
    CHECK(grid_rate_above(grid, 0.4689955935892812) == Rational(31, 64));
    CHECK(grid_rate_above(grid, 1.0) == Rational(1, 1));
    CHECK(grid_rate_above(grid, 0.8812908992306927) == Rational(57, 64));
    CHECK_THROWS_AS(grid_rate_above(grid, 2.5), DomainError);
}

TEST_CASE("sweep rows are ordered and independent of the thread count") {
    SweepConfig cfg;
    cfg.eps = 0.1;
    cfg.n_list = {512, 2048};
    cfg.samples = 4;
    cfg.seed = 9;
    cfg.threads = 1;
    const auto model = processes::ProcessModel::parse("mixture:1/2@bernoulli:p=1/10;1/2@bernoulli:p=1/2");
    const auto a = theorem1_sweep(model, cfg);
    cfg.threads = 3;
    const auto b = theorem1_sweep(model, cfg);
    REQUIRE(a.rows.size() == 8);
    REQUIRE(a.aggregates.size() == 2);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].n == cfg.n_list[i / 4]);
        CHECK(a.rows[i].sample == i % 4);
        CHECK(a.rows[i].report.khat == b.rows[i].report.khat);
        CHECK(a.rows[i].report.ec == b.rows[i].report.ec);
        CHECK(a.rows[i].sigma_hat == b.rows[i].sigma_hat);
    }
    CHECK(a.aggregates[1].c_scheme == 27);
    cfg.n_list = {2048, 512};
    CHECK_THROWS_AS(theorem1_sweep(model, cfg), DomainError);
}

TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(std::isnan(median({})));
    CHECK(median({1.0, INFINITY, INFINITY}) == INFINITY);
}
