#include <doctest.h>

#include <cmath>

#include "eclab/codec.hpp"
#include "eclab/ensembles.hpp"
#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/processes.hpp"

using namespace eclab;
using ensembles::Ensemble;
using ensembles::Tag;

namespace {

std::vector<Ensemble> samples_of_length(std::uint64_t n) {
    std::vector<Ensemble> out{
        Ensemble::uniform_all(n),
        Ensemble::uniform_typical(typical_sets::TypicalSetSpec(Rational(3, 2), n)),
        Ensemble::iid_quantized(n, 1, 1),
        Ensemble::iid_quantized(n, 3, 5),
        Ensemble::iid_quantized(n, 6, 63),
        Ensemble::markov_quantized(n, 1, 1, 1, 1),
        Ensemble::markov_quantized(n, 2, 3, 3, 1),
        Ensemble::markov_quantized(n, 3, 1, 3, 5),
        Ensemble::markov_quantized(n, 5, 31, 2, 17),
    };
    return out;
}

// -sum p log2 p over {0,1}^n.
double brute_entropy(const Ensemble& e, unsigned n) {
    double h = 0.0;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
        const double p = e.prob(BitString::from_word(w, n));
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

// H(X_1) + sum_t H(X_{t+1} | X_t) with the marginal propagated step by step.
double forward_entropy(std::uint64_t n, double p01, double p10, double q) {
    double h = processes::binary_entropy(q);
    double p1 = q;
    for (std::uint64_t t = 1; t < n; ++t) {
        h += (1.0 - p1) * processes::binary_entropy(p01) + p1 * processes::binary_entropy(p10);
        p1 = p1 * (1.0 - p10) + (1.0 - p1) * p01;
    }
    return h;
}

}  // namespace

TEST_CASE("description lengths per tag") {
    const auto x = BitString::from_text("0110100110");
    const std::uint64_t header = 3 + codec::nat_length(10);
    CHECK(Ensemble::singleton_raw(x).desc_len() == header + 10);
    CHECK(Ensemble::singleton_lz(x).desc_len() == header + lz78::code_len(x));
    CHECK(Ensemble::uniform_all(10).desc_len() == header);
    CHECK(Ensemble::uniform_typical(typical_sets::TypicalSetSpec(Rational(3, 2), 10)).desc_len() ==
          header + codec::rational_length(Rational(3, 2)));
    CHECK(Ensemble::iid_quantized(10, 3, 5).desc_len() == header + codec::nat_length(3) + 3);
    CHECK(Ensemble::markov_quantized(10, 3, 1, 2, 3).desc_len() == header + codec::nat_length(3) + 9);
    CHECK(Ensemble::singleton_raw(BitString::from_text("0")).desc_len() == 5);
    CHECK(Ensemble::uniform_all(1).total_info() == 5.0);
}

TEST_CASE("every member is a probability distribution on {0,1}^n") {
    for (unsigned n : {1u, 3u, 7u}) {
        for (const auto& e : samples_of_length(n)) {
            double sum = 0.0;
            for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) sum += e.prob(BitString::from_word(w, n));
            CAPTURE(e.to_string());
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    const auto x = BitString::from_text("01101");
    CHECK(Ensemble::singleton_raw(x).prob(x) == 1.0);
    CHECK(Ensemble::singleton_lz(x).prob(BitString::from_text("01100")) == 0.0);
    CHECK(Ensemble::uniform_all(5).prob(BitString::from_text("0110")) == 0.0);
}

TEST_CASE("entropy equals the brute-force Shannon entropy") {
    for (unsigned n : {1u, 2u, 5u, 9u}) {
        for (const auto& e : samples_of_length(n)) {
            CAPTURE(e.to_string());
            CHECK(e.entropy() == doctest::Approx(brute_entropy(e, n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed-form Markov entropy matches the step-by-step recursion") {
    for (std::uint64_t n : {1u, 2u, 10u, 1000u, 262144u}) {
        for (unsigned m : {1u, 3u, 6u}) {
            const std::uint64_t full = std::uint64_t{1} << m;
            for (std::uint64_t a0 = 1; a0 < full; a0 += std::max<std::uint64_t>(1, full / 5)) {
                for (std::uint64_t a1 = 1; a1 < full; a1 += std::max<std::uint64_t>(1, full / 4)) {
                    for (std::uint64_t q = 1; q < full; q += std::max<std::uint64_t>(1, full / 3)) {
                        const double f = std::ldexp(1.0, -static_cast<int>(m));
                        const double expected = forward_entropy(n, a0 * f, a1 * f, q * f);
                        REQUIRE(ensembles::markov_entropy(n, m, a0, a1, q) ==
                                doctest::Approx(expected).epsilon(1e-9).scale(1.0));
                    }
                }
            }
        }
    }
    // frozen from the recursion evaluated independently
    CHECK(ensembles::markov_entropy(10, 3, 1, 3, 5) == doctest::Approx(7.07852081119081).epsilon(1e-12));
    CHECK(ensembles::markov_entropy(1, 3, 1, 3, 5) == doctest::Approx(0.954434002924965).epsilon(1e-12));
}

TEST_CASE("quantized kernels agree with the ensemble methods") {
    const auto x = BitString::from_text("0001101110");
    const auto iid = Ensemble::iid_quantized(10, 4, 7);
    CHECK(iid.neg_log2_prob(x) == ensembles::iid_neg_log2(10, x.count_ones(), 4, 7));
    CHECK(iid.neg_log2_prob(x) == doctest::Approx(-5 * std::log2(7.0 / 16) - 5 * std::log2(9.0 / 16)));
    const auto mk = Ensemble::markov_quantized(10, 2, 1, 3, 2);
    const auto c = ensembles::TransitionCounts::of(x);
    CHECK(c.c00 == 2);
    CHECK(c.c01 == 2);
    CHECK(c.c10 == 2);
    CHECK(c.c11 == 3);
    CHECK(mk.neg_log2_prob(x) == ensembles::markov_neg_log2(c, 2, 1, 3, 2));
    // same transitions as the stationary chain, whose first symbol is 0 with probability 3/4 instead of 1/2
    const double stationary = processes::block_prob(processes::ProcessModel::parse("markov:p01=1/4,p10=3/4"), x);
    CHECK(std::exp2(-mk.neg_log2_prob(x)) == doctest::Approx(stationary / 0.75 * 0.5).epsilon(1e-12));
}

TEST_CASE("serialization is prefix-free and decodes to the same ensemble") {
    const auto x = BitString::from_text("1011010100010");
    std::vector<Ensemble> all = samples_of_length(13);
    all.push_back(Ensemble::singleton_raw(x));
    all.push_back(Ensemble::singleton_lz(x));
    BitString stream;
    for (const auto& e : all) {
        CHECK(e.serialize().size() == e.desc_len());
        CHECK(ensembles::decode_ensemble(e.serialize()) == e);
        CHECK(ensembles::parse_ensemble(e.to_string()).to_string() == e.to_string());
        e.append_serialization(stream);
    }
    codec::BitReader reader(stream);
    for (const auto& e : all) CHECK(ensembles::read_ensemble(reader) == e);
    CHECK(reader.at_end());
}

TEST_CASE("malformed serializations are decode errors") {
    CHECK_THROWS_AS(ensembles::decode_ensemble(BitString::from_text("111")), DecodeError);
    CHECK_THROWS_AS(ensembles::decode_ensemble(BitString::from_text("10")), DecodeError);
    auto bits = Ensemble::iid_quantized(8, 3, 5).serialize();
    bits.push_back(false);
    CHECK_THROWS_AS(ensembles::decode_ensemble(bits), DecodeError);
    // IID with a = 0
    BitString zero;
    zero.append_bits(4, 3);
    codec::append_nat(zero, 8);
    codec::append_nat(zero, 2);
    zero.append_bits(0, 2);
    CHECK_THROWS_AS(ensembles::decode_ensemble(zero), DecodeError);
    // empty typical set
    BitString empty;
    empty.append_bits(3, 3);
    codec::append_nat(empty, 16);
    codec::append_rational(empty, Rational(1, 2));
    CHECK_THROWS_AS(ensembles::decode_ensemble(empty), DecodeError);
}

TEST_CASE("invalid parameters are domain errors") {
    CHECK_THROWS_AS(Ensemble::iid_quantized(8, 3, 8), DomainError);
    CHECK_THROWS_AS(Ensemble::iid_quantized(8, 0, 1), DomainError);
    CHECK_THROWS_AS(Ensemble::markov_quantized(8, 2, 0, 1, 1), DomainError);
    CHECK_THROWS_AS(Ensemble::uniform_all(0), DomainError);
    CHECK_THROWS_AS(Ensemble::uniform_typical(typical_sets::TypicalSetSpec(Rational(1, 2), 16)), DomainError);
    CHECK_THROWS_AS(ensembles::parse_ensemble("iid:n=8,m=3"), DomainError);
    CHECK_THROWS_AS(ensembles::parse_ensemble("gaussian:n=8"), DomainError);
}

TEST_CASE("delta-typicality") {
    const auto x = BitString::from_text("00000000");
    // -log2 P(x) = 8 log2(8/7) ~ 1.54, H = 8 h(1/8) ~ 4.35
    CHECK(ensembles::is_delta_typical(Ensemble::iid_quantized(8, 3, 1), x, 0.0));
    // -log2 P(x) = 8 log2 8 = 24 > H (1 + 1)
    CHECK_FALSE(ensembles::is_delta_typical(Ensemble::iid_quantized(8, 3, 7), x, 1.0));
    CHECK(ensembles::is_delta_typical(Ensemble::uniform_all(8), x, 0.0));
    CHECK(ensembles::is_delta_typical(Ensemble::singleton_raw(x), x, 0.0));
    CHECK_FALSE(ensembles::is_delta_typical(Ensemble::singleton_raw(BitString::from_text("00000001")), x, 5.0));
    CHECK_THROWS_AS(ensembles::is_delta_typical(Ensemble::uniform_all(8), x, -0.5), DomainError);
}

TEST_CASE("unresolved typical-set ensembles beyond n_max") {
    const auto e = Ensemble::uniform_typical(typical_sets::TypicalSetSpec(Rational(1, 2), 1000));
    CHECK_FALSE(e.has_exact_entropy());
    CHECK_THROWS_AS(e.entropy(), ResourceError);
    CHECK(e.desc_len() == 3 + codec::nat_length(1000) + 5);
    CHECK(ensembles::decode_ensemble(e.serialize()) == e);
}

TEST_CASE("code lengths snap to integers within the slack") {
    CHECK(ensembles::code_length_bits(3.0) == 3);
    CHECK(ensembles::code_length_bits(3.0 + 1e-12) == 3);
    CHECK(ensembles::code_length_bits(3.0 - 1e-12) == 3);
    CHECK(ensembles::code_length_bits(3.001) == 4);
    CHECK(ensembles::code_length_bits(0.0) == 0);
}
