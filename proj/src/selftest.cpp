#include "eclab/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "eclab/codec.hpp"
#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/oracle/naive_complexity.hpp"
#include "eclab/parallel.hpp"
#include "eclab/rng.hpp"
#include "eclab/typical_sets.hpp"

namespace eclab::selftest {

using complexity::Budget;
using complexity::ComplexityQuery;
using complexity::Mode;
using u128 = unsigned __int128;

namespace {

constexpr std::uint64_t kChunks = 64;

// Splits [0, count) into at most kChunks index ranges checked in parallel and
// merged in index order.
template <class Check>
SuiteResult run_cases(std::string name, std::uint64_t count, unsigned threads, Check&& check) {
    const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min(count, kChunks));
    std::vector<SuiteResult> parts(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        for (std::uint64_t i = count * c / chunks; i < count * (c + 1) / chunks; ++i) {
            try {
                check(i, parts[c]);
            } catch (const std::exception& e) {
                parts[c].record(false, [&] { return fmt::format("case {}: {}", i, e.what()); });
            }
        }
    });
    SuiteResult out(std::move(name));
    for (const auto& p : parts) out.merge(p);
    return out;
}

// Index i enumerates all strings of length 1..max_n, shorter first, then in
// lexicographic order.
BitString string_at(std::uint64_t i) {
    const unsigned n = codec::floor_log2(i + 2);
    return BitString::from_word(i + 2 - (std::uint64_t{1} << n), n);
}

std::uint64_t strings_up_to(unsigned max_n) {
    return (std::uint64_t{1} << (max_n + 1)) - 2;
}

// c^b <= 2^e, exactly.
bool power_at_most_pow2(std::uint64_t c, std::uint64_t b, std::uint64_t e) {
    std::vector<std::uint64_t> limbs{1};
    for (std::uint64_t k = 0; k < b; ++k) {
        u128 carry = 0;
        for (auto& limb : limbs) {
            const u128 v = static_cast<u128>(limb) * c + carry;
            limb = static_cast<std::uint64_t>(v);
            carry = v >> 64;
        }
        if (carry != 0) limbs.push_back(static_cast<std::uint64_t>(carry));
    }
    while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    const std::uint64_t top_bit = 64 * (limbs.size() - 1) + codec::floor_log2(limbs.back());
    if (top_bit != e) return top_bit < e;
    // c^b has bit e as its highest bit: equal to 2^e iff every lower bit is clear
    for (std::size_t i = 0; i + 1 < limbs.size(); ++i) {
        if (limbs[i] != 0) return false;
    }
    return limbs.back() == (std::uint64_t{1} << (e % 64));
}

std::string describe(const BitString& x, double delta, double budget) {
    return fmt::format("x={} delta={} Delta={}", x.to_string(), delta, budget);
}

std::string show(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string("EMPTY-DOMAIN");
}

}  // namespace

void SuiteResult::record(bool ok, const std::function<std::string()>& describe) {
    ++total;
    if (ok) {
        ++passed;
    } else if (failure.empty()) {
        failure = describe();
    }
}

void SuiteResult::merge(const SuiteResult& other) {
    if (failure.empty()) failure = other.failure;
    passed += other.passed;
    total += other.total;
}

CodecHooks CodecHooks::reference() {
    return {[](std::uint64_t n) { return codec::encode_nat(n); },
            [](const BitString& bits) {
                const auto d = codec::decode_nat(bits);
                if (d.consumed != bits.size()) throw DecodeError("codeword has trailing bits");
                return d.value;
            }};
}

CodecHooks CodecHooks::mutated() {
    CodecHooks hooks = reference();
    hooks.encode_nat = [](std::uint64_t n) {
        BitString code = codec::encode_nat(n);
        return code.size() > 1 ? code.slice(0, code.size() - 1) : code;
    };
    return hooks;
}

std::vector<double> default_budgets() {
    std::vector<double> b;
    for (int d = 0; d <= 32; d += 2) b.push_back(d);
    return b;
}

std::vector<double> default_deltas() {
    return {0.0, 0.25, 1.0};
}

SuiteResult codec_roundtrip(const CodecHooks& codec, std::uint64_t nat_limit) {
    SuiteResult s("codec-roundtrip");
    const auto check_nat = [&](std::uint64_t n) {
        try {
            const std::uint64_t back = codec.decode_nat(codec.encode_nat(n));
            s.record(back == n, [&] { return fmt::format("delta({}) decoded as {}", n, back); });
        } catch (const std::exception& e) {
            s.record(false, [&] { return fmt::format("delta({}): {}", n, e.what()); });
        }
    };
    for (std::uint64_t n = 1; n <= nat_limit; ++n) check_nat(n);
    for (std::uint64_t n : {std::uint64_t{1} << 32, (std::uint64_t{1} << 32) + 1, std::uint64_t{1} << 63,
                            ~std::uint64_t{0}}) {
        check_nat(n);
    }
    for (std::uint64_t b = 1; b <= 64; ++b) {
        for (std::uint64_t a = 1; a <= 2 * b; ++a) {
            const Rational r(a, b);
            if (r.den() != b) continue;
            try {
                const auto d = codec::decode_rational(codec::encode_rational(r));
                s.record(d.value == r && d.consumed == codec::rational_length(r),
                         [&] { return fmt::format("rational {} decoded as {}", r.to_string(), d.value.to_string()); });
            } catch (const std::exception& e) {
                s.record(false, [&] { return fmt::format("rational {}: {}", r.to_string(), e.what()); });
            }
        }
    }
    return s;
}

SuiteResult codec_kraft(const CodecHooks& codec, std::uint64_t nat_limit) {
    SuiteResult s("codec-kraft");
    // Kraft sum scaled by 2^64; every codeword here is shorter than 64 bits.
    u128 sum = 0;
    const u128 one = u128{1} << 64;
    for (std::uint64_t n = 1; n <= nat_limit; ++n) {
        const std::size_t len = codec.encode_nat(n).size();
        sum += u128{1} << (64 - len);
        s.record(sum <= one, [&] { return fmt::format("partial Kraft sum exceeds 1 at n = {}", n); });
    }
    return s;
}

SuiteResult lz_kraft(unsigned max_n, unsigned threads) {
    return run_cases("lz-kraft", max_n, threads, [](std::uint64_t i, SuiteResult& s) {
        const auto n = static_cast<unsigned>(i + 1);
        u128 sum = 0;
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) sum += u128{1} << (64 - lz78::code_len_word(w, n));
        s.record(sum <= (u128{1} << 64), [&] { return fmt::format("Kraft sum exceeds 1 at n = {}", n); });
    });
}

SuiteResult lz_roundtrip(unsigned max_n, unsigned threads) {
    return run_cases("lz-roundtrip", strings_up_to(max_n), threads, [](std::uint64_t i, SuiteResult& s) {
        const BitString x = string_at(i);
        const BitString code = lz78::encode(x);
        const bool ok = lz78::decode(code) == x && code.size() == codec::nat_length(x.size()) + lz78::code_len(x);
        s.record(ok, [&] { return "x=" + x.to_string(); });
    });
}

SuiteResult lz_random_roundtrip(std::size_t count, std::uint64_t max_len, std::uint64_t seed, unsigned threads) {
    const double span = std::log2(static_cast<double>(max_len));
    return run_cases("lz-random-roundtrip", count, threads, [&](std::uint64_t i, SuiteResult& s) {
        SplitMix64 rng(stream_seed(seed, i));
        const auto len = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::exp2(rng.uniform() * span)), 1, max_len);
        const double p = i % 2 == 0 ? 0.5 : static_cast<double>(1 + rng.next() % 15) / 16.0;
        BitString x;
        x.reserve(len);
        for (std::uint64_t k = 0; k < len; ++k) x.push_back(rng.uniform() < p);
        const BitString code = lz78::encode(x);
        s.record(lz78::decode(code) == x, [&] { return fmt::format("sample {} (n = {})", i, len); });
    });
}

SuiteResult size_bound(unsigned max_n, const std::vector<Rational>& rates, unsigned threads) {
    const std::uint64_t cases = static_cast<std::uint64_t>(max_n) * rates.size();
    return run_cases("size-bound", cases, threads, [&](std::uint64_t i, SuiteResult& s) {
        const auto n = static_cast<unsigned>(i / rates.size() + 1);
        const Rational& r = rates[i % rates.size()];
        const std::uint64_t count = typical_sets::cardinality(typical_sets::TypicalSetSpec(r, n), max_n);
        // |T| <= 2^(a n / b)  <=>  |T|^b <= 2^(a n)
        const bool ok = count == 0 || power_at_most_pow2(count, r.den(), r.num() * n);
        s.record(ok, [&] { return fmt::format("|T_(r={}, n={})| = {}", r.to_string(), n, count); });
    });
}

std::vector<SuiteResult> complexity_invariants(unsigned max_n, const std::vector<double>& deltas,
                                               const std::vector<double>& budgets, unsigned threads,
                                               const complexity::Engine& engine) {
    const std::uint64_t count = strings_up_to(max_n);
    const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min(count, kChunks));
    struct Parts {
        SuiteResult budget = SuiteResult("anti-monotone-Delta");
        SuiteResult delta = SuiteResult("anti-monotone-delta");
        SuiteResult inequality = SuiteResult("coarse-le-Delta-plus-ec");
        SuiteResult witness = SuiteResult("witness-validity");
    };
    std::vector<Parts> parts(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        Parts& p = parts[c];
        for (std::uint64_t i = count * c / chunks; i < count * (c + 1) / chunks; ++i) {
            const BitString x = string_at(i);
            std::vector<std::vector<std::optional<std::uint64_t>>> ec(deltas.size());
            for (std::size_t a = 0; a < deltas.size(); ++a) {
                for (std::size_t b = 0; b < budgets.size(); ++b) {
                    ComplexityQuery q;
                    q.delta = deltas[a];
                    q.budget = Budget::absolute(budgets[b]);
                    const auto r = engine.ec(x, q);
                    ec[a].push_back(r.ec);
                    const auto where = [&] { return describe(x, deltas[a], budgets[b]); };
                    if (r.ec) {
                        p.inequality.record(r.coarse_ec <= budgets[b] + static_cast<double>(*r.ec) + kInequalityTolerance,
                                            [&] { return where() + fmt::format(" coarse={} ec={}", r.coarse_ec, *r.ec); });
                        const auto& w = *r.witness;
                        const bool valid = w.prob(x) > 0.0 && ensembles::is_delta_typical(w, x, deltas[a]) &&
                                           complexity::within_budget(w.total_info(), r.khat, budgets[b]) &&
                                           w.desc_len() == *r.ec;
                        p.witness.record(valid, [&] { return where() + " witness " + w.to_string(); });
                    }
                    const auto& kw = *r.khat_witness;
                    p.witness.record(kw.desc_len() + ensembles::code_length_bits(kw.neg_log2_prob(x)) == r.khat,
                                     [&] { return where() + " khat witness " + kw.to_string(); });
                    const auto& cw = *r.coarse_witness;
                    p.witness.record(ensembles::is_delta_typical(cw, x, deltas[a]) &&
                                         2.0 * static_cast<double>(cw.desc_len()) + cw.entropy() -
                                                 static_cast<double>(r.khat) ==
                                             r.coarse_ec,
                                     [&] { return where() + " coarse witness " + cw.to_string(); });
                }
            }
            // A larger budget or tolerance can only enlarge the domain.
            const auto monotone = [](const std::optional<std::uint64_t>& small, const std::optional<std::uint64_t>& large) {
                return !small || (large && *large <= *small);
            };
            for (std::size_t a = 0; a < deltas.size(); ++a) {
                for (std::size_t b = 0; b + 1 < budgets.size(); ++b) {
                    p.budget.record(monotone(ec[a][b], ec[a][b + 1]), [&] {
                        return describe(x, deltas[a], budgets[b]) + fmt::format(" ec {} then {} at Delta={}", show(ec[a][b]),
                                                                                 show(ec[a][b + 1]), budgets[b + 1]);
                    });
                }
            }
            for (std::size_t b = 0; b < budgets.size(); ++b) {
                for (std::size_t a = 0; a + 1 < deltas.size(); ++a) {
                    p.delta.record(monotone(ec[a][b], ec[a + 1][b]), [&] {
                        return describe(x, deltas[a], budgets[b]) + fmt::format(" ec {} then {} at delta={}", show(ec[a][b]),
                                                                                 show(ec[a + 1][b]), deltas[a + 1]);
                    });
                }
            }
        }
    });
    Parts total;
    for (const auto& p : parts) {
        total.budget.merge(p.budget);
        total.delta.merge(p.delta);
        total.inequality.merge(p.inequality);
        total.witness.merge(p.witness);
    }
    return {total.budget, total.delta, total.inequality, total.witness};
}

SuiteResult upper_soundness(unsigned max_n, const std::vector<double>& deltas, const std::vector<double>& budgets,
                            unsigned threads, const complexity::Engine& engine) {
    return run_cases("upper-soundness", strings_up_to(max_n), threads, [&](std::uint64_t i, SuiteResult& s) {
        const BitString x = string_at(i);
        for (double delta : deltas) {
            for (double budget : budgets) {
                ComplexityQuery q;
                q.delta = delta;
                q.budget = Budget::absolute(budget);
                const auto exact = engine.ec(x, q);
                q.mode = Mode::Upper;
                const auto upper = engine.ec(x, q);
                const bool ec_ok = !upper.ec || (exact.ec && *upper.ec >= *exact.ec);
                const bool coarse_ok = upper.coarse_ec >= exact.coarse_ec - kInequalityTolerance;
                s.record(ec_ok && coarse_ok && upper.khat == exact.khat, [&] {
                    return describe(x, delta, budget) + fmt::format(" exact ec={} coarse={}, upper ec={} coarse={}",
                                                                    show(exact.ec), exact.coarse_ec, show(upper.ec),
                                                                    upper.coarse_ec);
                });
            }
        }
    });
}

SuiteResult oracle_equivalence(unsigned max_n, const std::vector<double>& deltas, const std::vector<double>& budgets,
                               unsigned threads, const complexity::Engine& engine) {
    return run_cases("oracle-equivalence", strings_up_to(max_n), threads, [&](std::uint64_t i, SuiteResult& s) {
        const BitString x = string_at(i);
        const oracle::NaiveOracle naive(x, engine.config());
        const auto k = engine.khat(x);
        s.record(k.bits == naive.khat().bits && k.witness == naive.khat().witness, [&] {
            return fmt::format("x={} khat {} via {} vs naive {} via {}", x.to_string(), k.bits, k.witness.to_string(),
                               naive.khat().bits, naive.khat().witness.to_string());
        });
        for (double delta : deltas) {
            const auto coarse = engine.coarse_ec(x, delta, Mode::Exact);
            const auto naive_coarse = naive.coarse_ec(delta);
            s.record(coarse.value == naive_coarse.value && coarse.witness == naive_coarse.witness, [&] {
                return fmt::format("x={} delta={} coarse {} via {} vs naive {} via {}", x.to_string(), delta, coarse.value,
                                   coarse.witness.to_string(), naive_coarse.value, naive_coarse.witness.to_string());
            });
            const auto naive_ec = naive.ec(delta, budgets);
            for (std::size_t b = 0; b < budgets.size(); ++b) {
                ComplexityQuery q;
                q.delta = delta;
                q.budget = Budget::absolute(budgets[b]);
                const auto r = engine.ec(x, q);
                const auto& o = naive_ec[b];
                const bool same = r.ec.has_value() == o.has_value() &&
                                  (!o || (*r.ec == o->bits && *r.witness == o->witness));
                s.record(same, [&] {
                    return describe(x, delta, budgets[b]) +
                           fmt::format(" ec {} via {} vs naive {} via {}", show(r.ec),
                                       r.witness ? r.witness->to_string() : "-", o ? std::to_string(o->bits) : "EMPTY-DOMAIN",
                                       o ? o->witness.to_string() : "-");
                });
            }
        }
    });
}

bool run(const Options& options, std::ostream& out) {
    const CodecHooks codec = options.mutate_codec ? CodecHooks::mutated() : CodecHooks::reference();
    std::vector<Rational> rates;
    for (std::uint64_t k = 1; k <= 16; ++k) rates.emplace_back(k, 8);
    const auto deltas = default_deltas();
    const auto budgets = default_budgets();

    std::vector<SuiteResult> suites;
    const auto emit = [&](SuiteResult s) {
        out << fmt::format("{} {} {}/{}", s.ok() ? "PASS" : "FAIL", s.name, s.passed, s.total);
        if (!s.ok()) out << "  first failure: " << s.failure;
        out << '\n' << std::flush;
        suites.push_back(std::move(s));
    };
    emit(codec_roundtrip(codec, options.codec_limit));
    emit(codec_kraft(codec, options.codec_limit));
    emit(lz_kraft(options.lz_n, options.threads));
    emit(lz_roundtrip(options.lz_n, options.threads));
    emit(size_bound(options.size_n, rates, options.threads));
    for (auto& s : complexity_invariants(options.invariant_n, deltas, budgets, options.threads)) emit(std::move(s));
    emit(upper_soundness(std::min(options.invariant_n, 8u), deltas, budgets, options.threads));
    emit(oracle_equivalence(options.oracle_n, deltas, budgets, options.threads));
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

}  // namespace eclab::selftest
