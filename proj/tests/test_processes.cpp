#include <doctest.h>

#include <cmath>

#include "eclab/errors.hpp"
#include "eclab/processes.hpp"

using namespace eclab;
using processes::ProcessModel;

namespace {

double total_block_prob(const ProcessModel& m, unsigned n) {
    double sum = 0.0;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) sum += processes::block_prob(m, BitString::from_word(w, n));
    return sum;
}

}  // namespace

TEST_CASE("entropy rates of the reference processes") {
    CHECK(processes::entropy_rate(ProcessModel::parse("bernoulli:p=3/10")) == doctest::Approx(0.8812908992306927).epsilon(1e-12));
    CHECK(processes::entropy_rate(ProcessModel::parse("markov:flip=1/10")) == doctest::Approx(0.4689955935892812).epsilon(1e-12));
    CHECK(processes::entropy_rate(ProcessModel::parse("bernoulli:p=1/2")) == 1.0);
    // pi = (3/4, 1/4) for p01 = 1/5, p10 = 3/5
    const auto m = ProcessModel::parse("markov:p01=1/5,p10=3/5");
    const double expected = 0.75 * processes::binary_entropy(0.2) + 0.25 * processes::binary_entropy(0.6);
    CHECK(processes::entropy_rate(m) == doctest::Approx(expected).epsilon(1e-12));
    const auto mix = ProcessModel::parse("mixture:1/2@bernoulli:p=1/10;1/2@bernoulli:p=1/2");
    CHECK(processes::entropy_rate(mix) == doctest::Approx(0.5 * processes::binary_entropy(0.1) + 0.5).epsilon(1e-12));
}

TEST_CASE("stationary distribution of a two-state chain") {
    const auto pi = processes::stationary_dist({{{0.8, 0.2}, {0.6, 0.4}}});
    CHECK(pi[0] == doctest::Approx(0.75));
    CHECK(pi[1] == doctest::Approx(0.25));
    CHECK_THROWS_WITH_AS(processes::stationary_dist({{{1.0, 0.0}, {0.5, 0.5}}}), doctest::Contains("state 0 is absorbing"),
                         DomainError);
}

TEST_CASE("block probabilities sum to one over each length") {
    for (const char* spec : {"bernoulli:p=3/10", "markov:flip=1/10", "markov:p01=1/5,p10=3/5",
                             "mixture:1/2@bernoulli:p=1/10;1/2@bernoulli:p=1/2", "markov:p01=1,p10=1"}) {
        const auto m = ProcessModel::parse(spec);
        for (unsigned n = 1; n <= 8; ++n) CHECK(total_block_prob(m, n) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Markov block probabilities are consistent under extension") {
    const auto m = ProcessModel::parse("markov:p01=1/5,p10=3/5");
    const auto x = BitString::from_text("0110");
    const double extended = processes::block_prob(m, BitString::from_text("01100")) +
                            processes::block_prob(m, BitString::from_text("01101"));
    CHECK(extended == doctest::Approx(processes::block_prob(m, x)).epsilon(1e-14));
}

TEST_CASE("parse accepts inline and document forms and round-trips") {
    const auto a = ProcessModel::parse("markov:row0=4/5|1/5,row1=3/5|2/5");
    CHECK(a.to_string() == ProcessModel::parse("markov:p01=1/5,p10=3/5").to_string());
    const auto doc = ProcessModel::parse("# two coins\nvariant = mixture\ncomponent = 1/2 bernoulli:p=1/10\n"
                                         "component = 1/2 bernoulli:p=1/2\n");
    CHECK(doc.to_string() == ProcessModel::parse("mixture:1/2@bernoulli:p=1/10;1/2@bernoulli:p=1/2").to_string());
    const auto flip = ProcessModel::parse("variant = markov\nflip = 1/10\n");
    CHECK(ProcessModel::parse(flip.to_string()).to_string() == flip.to_string());
}

TEST_CASE("invalid models are rejected with a reason") {
    CHECK_THROWS_WITH_AS(ProcessModel::parse("markov:p01=0,p10=1/2"), doctest::Contains("state 0 is absorbing"), DomainError);
    CHECK_THROWS_WITH_AS(ProcessModel::parse("markov:p01=1/2,p10=0"), doctest::Contains("state 1 is absorbing"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("markov:row0=1/2|1/3,row1=1/2|1/2"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("bernoulli:p=3/2"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("bernoulli:q=1/2"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("poisson:l=1"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("mixture:1/2@bernoulli:p=1/10;1/3@bernoulli:p=1/2"), DomainError);
    CHECK_THROWS_AS(ProcessModel::parse("mixture:1/2@markov:p01=1,p10=1;1/2@bernoulli:p=1/2"), DomainError);
}

TEST_CASE("sampling is deterministic and nested across lengths") {
    const auto m = ProcessModel::parse("mixture:1/2@bernoulli:p=1/10;1/2@markov:flip=1/10");
    for (std::uint64_t seed : {1u, 7u, 99u}) {
        const auto longer = processes::sample_path(m, 2000, seed);
        const auto shorter = processes::sample_path(m, 500, seed);
        CHECK(longer.bits == processes::sample_path(m, 2000, seed).bits);
        CHECK(longer.component == shorter.component);
        CHECK(longer.bits.starts_with(shorter.bits));
    }
    CHECK(processes::sample(m, 64, 1) != processes::sample(m, 64, 2));
}

TEST_CASE("sample frequencies follow the parameters") {
    const auto m = ProcessModel::parse("bernoulli:p=3/10");
    const auto x = processes::sample(m, 200000, 5);
    CHECK(double(x.count_ones()) / 200000.0 == doctest::Approx(0.3).epsilon(0.02));
    const auto chain = processes::sample(ProcessModel::parse("markov:flip=1/10"), 200000, 5);
    std::size_t flips = 0;
    for (std::size_t i = 1; i < chain.size(); ++i) flips += chain[i] != chain[i - 1];
    CHECK(double(flips) / 199999.0 == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("ergodic decomposition lists the mixture components") {
    const auto mix = ProcessModel::parse("mixture:1/4@bernoulli:p=1/10;3/4@bernoulli:p=1/2");
    const auto parts = processes::components(mix);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].weight == Rational(1, 4));
    CHECK(parts[1].model.to_string() == ProcessModel::parse("bernoulli:p=1/2").to_string());
    CHECK(processes::components(ProcessModel::parse("markov:flip=1/10")).size() == 1);
}
