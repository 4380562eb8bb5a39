#include "eclab/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "eclab/complexity.hpp"
#include "eclab/errors.hpp"
#include "eclab/experiments.hpp"
#include "eclab/lz78.hpp"
#include "eclab/parallel.hpp"
#include "eclab/processes.hpp"
#include "eclab/report.hpp"
#include "eclab/rng.hpp"
#include "eclab/selftest.hpp"
#include "eclab/typical_sets.hpp"

namespace eclab::cli {

namespace {

using complexity::Mode;
using report::Table;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    unsigned threads = 0;
    std::string format = "csv";
    std::string out_path;
};

// Where the strings under analysis come from: one literal string, or
// `samples` paths of a process model.
struct Input {
    std::string x;
    std::string hex;
    std::optional<std::size_t> bits;
    std::string model;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1;

    void bind(CLI::App* app) {
        app->add_option("--x", x, "string as ASCII 0/1");
        app->add_option("--hex", hex, "string as hex digits (needs --bits)");
        app->add_option("--bits", bits, "bit length of --hex");
        app->add_option("--model", model, "process model to sample inputs from");
        app->add_option("--n", n, "sample length (with --model)");
        app->add_option("--seed", seed, "seed (with --model)");
        app->add_option("--samples", samples, "number of sampled inputs (with --model)")->check(CLI::PositiveNumber);
    }
};

struct Sample {
    std::size_t index;
    std::uint64_t seed;
    BitString x;
};

Rational parse_rational(const std::string& text, std::string_view flag) {
    try {
        return Rational::parse(text);
    } catch (const DomainError& e) {
        throw UsageError(fmt::format("{}: {}", flag, e.what()));
    }
}

double parse_real(const std::string& text, std::string_view flag) {
    return parse_rational(text, flag).value();
}

processes::ProcessModel parse_model(const std::string& text) {
    if (text.empty()) throw UsageError("--model is required");
    try {
        return processes::ProcessModel::parse(text);
    } catch (const DomainError& e) {
        throw UsageError(fmt::format("--model: {}", e.what()));
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<std::uint64_t> parse_n_list(const std::string& text, std::string_view flag) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(text, ',')) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(fmt::format("{}: '{}' is not a positive integer", flag, item));
        }
    }
    if (out.empty()) throw UsageError(fmt::format("{} is empty", flag));
    return out;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
    if (!seed) throw UsageError("--seed is required for sampled inputs");
    return *seed;
}

std::vector<Sample> resolve(const Input& in, unsigned threads) {
    const int sources = !in.x.empty() + !in.hex.empty() + !in.model.empty();
    if (sources != 1) throw UsageError("give exactly one of --x, --hex, --model");
    if (!in.x.empty()) {
        try {
            return {{0, 0, BitString::from_text(in.x)}};
        } catch (const DomainError& e) {
            throw UsageError(fmt::format("--x: {}", e.what()));
        }
    }
    if (!in.hex.empty()) {
        if (!in.bits) throw UsageError("--hex needs --bits");
        try {
            return {{0, 0, BitString::from_hex(in.hex, *in.bits)}};
        } catch (const DomainError& e) {
            throw UsageError(fmt::format("--hex: {}", e.what()));
        }
    }
    const auto model = parse_model(in.model);
    if (!in.n) throw UsageError("--n is required with --model");
    const std::uint64_t seed = require_seed(in.seed);
    std::vector<Sample> out(in.samples);
    parallel_for(in.samples, threads, [&](std::size_t i) {
        const std::uint64_t s = stream_seed(seed, i);
        out[i] = {i, s, processes::sample(model, *in.n, s)};
    });
    return out;
}

Mode parse_mode(const std::string& text) {
    if (text == "exact") return Mode::Exact;
    if (text == "upper") return Mode::Upper;
    throw UsageError("--mode must be exact or upper");
}

std::uint8_t parse_tags(const std::string& text) {
    std::uint8_t mask = 0;
    for (const auto& name : split(text, ',')) {
        bool found = false;
        for (unsigned t = 0; t < 6; ++t) {
            if (ensembles::tag_name(static_cast<ensembles::Tag>(t)) == name) {
                mask |= static_cast<std::uint8_t>(1u << t);
                found = true;
            }
        }
        if (!found) throw UsageError(fmt::format("--tags: unknown ensemble tag '{}'", name));
    }
    return mask;
}

std::string rn_bound(const Rational& r, std::uint64_t n) {
    const Rational rn(r.num() * n, r.den());
    return rn.den() == 1 ? fmt::format("2^({})", rn.num()) : fmt::format("2^({})", rn.to_string());
}

void emit(const Table& table, const Global& g, std::ostream& out) {
    const auto format = g.format == "json" ? report::Format::Json : report::Format::Csv;
    if (g.out_path.empty()) {
        table.write(out, format);
        return;
    }
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) throw ResourceError("cannot open output file " + g.out_path);
    table.write(file, format);
    if (!file) throw ResourceError("failed writing " + g.out_path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective complexity under an explicit computable ensemble family", "eclab"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags; flags win");

    Global g;
    app.add_option("--threads", g.threads, "worker threads (0 = hardware count)");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out_path, "output file (default: standard output)");

    // gen
    auto* gen = app.add_subcommand("gen", "sample paths of a process model");
    std::string gen_model;
    std::uint64_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::size_t gen_count = 1;
    gen->add_option("--model", gen_model, "process model")->required();
    gen->add_option("--n", gen_n, "path length")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "seed")->required();
    gen->add_option("--count", gen_count, "number of paths")->check(CLI::PositiveNumber);

    // lz
    auto* lz = app.add_subcommand("lz", "LZ78 code length, encoding and decoding");
    Input lz_in;
    lz_in.bind(lz);
    bool lz_emit = false;
    std::string lz_decode;
    lz->add_flag("--emit-encoding", lz_emit, "add the self-delimiting encoding as a column");
    lz->add_option("--decode", lz_decode, "decode an encoding given as ASCII 0/1");

    // typical
    auto* typ = app.add_subcommand("typical", "LZ78 typical sets T_{r,n}");
    std::string typ_r;
    std::string typ_n;
    std::string typ_method = "count";
    std::string typ_model;
    std::optional<std::uint64_t> typ_seed;
    std::size_t typ_samples = 1000;
    bool typ_list = false;
    typ->add_option("--r", typ_r, "rate or comma list of rates a/b")->required();
    typ->add_option("--n", typ_n, "length or comma list of lengths")->required();
    typ->add_option("--method", typ_method, "count, enumerate or prob")
        ->check(CLI::IsMember({"count", "enumerate", "prob"}));
    typ->add_option("--model", typ_model, "process model (method prob)");
    typ->add_option("--seed", typ_seed, "seed (method prob)");
    typ->add_option("--samples", typ_samples, "sample paths (method prob)")->check(CLI::PositiveNumber);
    typ->add_flag("--list", typ_list, "with method enumerate: list the members");

    // khat
    auto* kh = app.add_subcommand("khat", "two-part code length over the family");
    Input kh_in;
    kh_in.bind(kh);

    // ec
    auto* ecc = app.add_subcommand("ec", "effective complexity");
    Input ec_in;
    ec_in.bind(ecc);
    std::string ec_delta = "0";
    std::string ec_budget;
    std::string ec_eps;
    std::string ec_mode = "exact";
    std::string ec_tags;
    std::optional<unsigned> ec_m_min;
    std::optional<unsigned> ec_m_max;
    std::string ec_r_min;
    std::string ec_r_max;
    ecc->add_option("--delta", ec_delta, "typicality tolerance a/b");
    auto* budget_opt = ecc->add_option("--Delta", ec_budget, "total-information budget a/b");
    ecc->add_option("--eps", ec_eps, "budget eps n, eps = a/b")->excludes(budget_opt);
    ecc->add_option("--mode", ec_mode, "exact or upper")->check(CLI::IsMember({"exact", "upper"}));
    ecc->add_option("--tags", ec_tags, "constraint: comma list of allowed tags");
    ecc->add_option("--m-min", ec_m_min, "constraint: minimum precision m");
    ecc->add_option("--m-max", ec_m_max, "constraint: maximum precision m");
    ecc->add_option("--r-min", ec_r_min, "constraint: minimum rate r");
    ecc->add_option("--r-max", ec_r_max, "constraint: maximum rate r");

    // coarse-ec
    auto* coarse = app.add_subcommand("coarse-ec", "coarse effective complexity");
    Input co_in;
    co_in.bind(coarse);
    std::string co_delta = "0";
    std::string co_mode = "exact";
    coarse->add_option("--delta", co_delta, "typicality tolerance a/b");
    coarse->add_option("--mode", co_mode, "exact or upper")->check(CLI::IsMember({"exact", "upper"}));

    // sweep-theorem1
    auto* sweep = app.add_subcommand("sweep-theorem1", "budget check of the uniform typical-set witness");
    std::string sw_model;
    std::string sw_eps;
    std::string sw_delta = "1/10";
    std::string sw_n;
    std::size_t sw_samples = 1;
    std::uint64_t sw_seed = 0;
    std::string sw_rows;
    sweep->add_option("--model", sw_model, "process model")->required();
    sweep->add_option("--eps", sw_eps, "budget rate eps = a/b")->required();
    sweep->add_option("--delta", sw_delta, "typicality tolerance a/b");
    sweep->add_option("--n-list", sw_n, "ascending comma list of lengths")->required();
    sweep->add_option("--samples", sw_samples, "samples per length")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sw_seed, "seed")->required();
    sweep->add_option("--rows", sw_rows, "also write per-sample rows to this file");

    // scan-max-coarse
    auto* scan = app.add_subcommand("scan-max-coarse", "exhaustive maximum of exact coarse_ec");
    std::string sc_n;
    std::string sc_delta = "0";
    bool sc_hist = false;
    scan->add_option("--n", sc_n, "length or comma list of lengths (<= 16)")->required();
    scan->add_option("--delta", sc_delta, "typicality tolerance a/b");
    scan->add_flag("--histogram", sc_hist, "emit the value histogram instead of the summary");

    // selftest
    auto* self = app.add_subcommand("selftest", "exhaustive small-n invariant suites");
    selftest::Options st;
    std::string st_mutate;
    self->add_option("--codec-limit", st.codec_limit, "naturals checked by the codec suites");
    self->add_option("--lz-n", st.lz_n, "LZ78 Kraft and round-trip length bound");
    self->add_option("--size-n", st.size_n, "size-bound length bound");
    self->add_option("--invariant-n", st.invariant_n, "monotonicity and inequality length bound");
    self->add_option("--oracle-n", st.oracle_n, "oracle-equivalence length bound");
    self->add_option("--mutate", st_mutate, "negative control: corrupt a component")->check(CLI::IsMember({"codec"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            const auto model = parse_model(gen_model);
            Table t({"sample", "seed", "component", "n", "x"});
            std::vector<processes::SamplePath> paths(gen_count);
            parallel_for(gen_count, g.threads,
                         [&](std::size_t i) { paths[i] = processes::sample_path(model, gen_n, stream_seed(gen_seed, i)); });
            for (std::size_t i = 0; i < gen_count; ++i) {
                t.add_row({i, stream_seed(gen_seed, i), paths[i].component, gen_n, paths[i].bits.to_string()});
            }
            emit(t, g, out);
        } else if (lz->parsed()) {
            if (!lz_decode.empty()) {
                BitString code;
                try {
                    code = BitString::from_text(lz_decode);
                } catch (const DomainError& e) {
                    throw UsageError(fmt::format("--decode: {}", e.what()));
                }
                const BitString x = lz78::decode(code);
                Table t({"n", "x"});
                t.add_row({x.size(), x.to_string()});
                emit(t, g, out);
            } else {
                std::vector<std::string> columns{"n", "sample", "seed", "lz_len", "phrases", "rate"};
                if (lz_emit) columns.emplace_back("encoding");
                Table t(columns);
                for (const auto& s : resolve(lz_in, g.threads)) {
                    const auto parse = lz78::parse(s.x);
                    const std::uint64_t len = lz78::code_len(s.x);
                    std::vector<nlohmann::json> row{s.x.size(),        s.index, s.seed, len, parse.phrases.size(),
                                                    static_cast<double>(len) / static_cast<double>(s.x.size())};
                    if (lz_emit) row.emplace_back(lz78::encode(s.x).to_string());
                    t.add_row(std::move(row));
                }
                emit(t, g, out);
            }
        } else if (typ->parsed()) {
            std::vector<Rational> rates;
            for (const auto& item : split(typ_r, ',')) rates.push_back(parse_rational(item, "--r"));
            if (rates.empty()) throw UsageError("--r is empty");
            const auto lengths = parse_n_list(typ_n, "--n");
            std::optional<processes::ProcessModel> model;
            std::uint64_t seed = 0;
            if (typ_method == "prob") {
                model = parse_model(typ_model);
                if (!typ_seed) throw UsageError("--seed is required with --method prob");
                seed = *typ_seed;
            }
            Table t = typ_list ? Table({"r", "n", "x"}) : Table({"r", "n", "value", "bound", "method"});
            for (const auto& r : rates) {
                for (std::uint64_t n : lengths) {
                    const typical_sets::TypicalSetSpec spec(r, n);
                    if (typ_method == "count") {
                        t.add_row({r.to_string(), n, typical_sets::cardinality(spec, typical_sets::kDefaultNMax, g.threads),
                                   rn_bound(r, n), typ_method});
                    } else if (typ_method == "enumerate") {
                        const auto members = typical_sets::enumerate(spec, typical_sets::kDefaultNMax, g.threads);
                        if (typ_list) {
                            for (const auto& x : members) t.add_row({r.to_string(), n, x.to_string()});
                        } else {
                            t.add_row({r.to_string(), n, members.size(), rn_bound(r, n), typ_method});
                        }
                    } else {
                        const double p = typical_sets::empirical_prob(spec, *model, typ_samples, seed, g.threads);
                        t.add_row({r.to_string(), n, p, rn_bound(r, n), typ_method});
                    }
                }
            }
            emit(t, g, out);
        } else if (kh->parsed()) {
            Table t({"n", "sample", "seed", "lz_len", "khat", "witness_tag", "witness_params"});
            for (const auto& s : resolve(kh_in, g.threads)) {
                const auto k = complexity::khat(s.x);
                t.add_row({s.x.size(), s.index, s.seed, lz78::code_len(s.x), k.bits,
                           std::string(ensembles::tag_name(k.witness.tag())), k.witness.params_string()});
            }
            emit(t, g, out);
        } else if (ecc->parsed()) {
            complexity::ComplexityQuery q;
            q.delta = parse_real(ec_delta, "--delta");
            if (!ec_budget.empty()) {
                q.budget = complexity::Budget::absolute(parse_real(ec_budget, "--Delta"));
            } else if (!ec_eps.empty()) {
                q.budget = complexity::Budget::per_symbol(parse_real(ec_eps, "--eps"));
            } else {
                throw UsageError("one of --Delta or --eps is required");
            }
            q.mode = parse_mode(ec_mode);
            if (!ec_tags.empty() || ec_m_min || ec_m_max || !ec_r_min.empty() || !ec_r_max.empty()) {
                complexity::Constraint c;
                if (!ec_tags.empty()) c.tag_mask = parse_tags(ec_tags);
                if (ec_m_min) c.m_min = *ec_m_min;
                if (ec_m_max) c.m_max = *ec_m_max;
                if (!ec_r_min.empty()) c.r_min = parse_rational(ec_r_min, "--r-min");
                if (!ec_r_max.empty()) c.r_max = parse_rational(ec_r_max, "--r-max");
                q.constraint = c;
            }
            const auto samples = resolve(ec_in, g.threads);
            std::vector<complexity::ComplexityReport> reports(samples.size());
            parallel_for(samples.size(), g.threads, [&](std::size_t i) { reports[i] = complexity::ec(samples[i].x, q); });
            Table t = report::complexity_table();
            for (std::size_t i = 0; i < samples.size(); ++i) {
                report::add_complexity_row(t, reports[i], samples[i].index, samples[i].seed);
            }
            emit(t, g, out);
        } else if (coarse->parsed()) {
            const double delta = parse_real(co_delta, "--delta");
            const Mode mode = parse_mode(co_mode);
            const auto samples = resolve(co_in, g.threads);
            Table t({"n", "sample", "seed", "khat", "coarse_ec", "witness_tag", "witness_params", "delta", "mode"});
            for (const auto& s : samples) {
                const auto c = complexity::coarse_ec(s.x, delta, mode);
                t.add_row({s.x.size(), s.index, s.seed, complexity::khat(s.x).bits, c.value,
                           std::string(ensembles::tag_name(c.witness.tag())), c.witness.params_string(), delta,
                           std::string(complexity::mode_name(mode))});
            }
            emit(t, g, out);
        } else if (sweep->parsed()) {
            complexity::SweepConfig cfg;
            cfg.eps = parse_real(sw_eps, "--eps");
            cfg.delta = parse_real(sw_delta, "--delta");
            cfg.n_list = parse_n_list(sw_n, "--n-list");
            cfg.samples = sw_samples;
            cfg.seed = sw_seed;
            cfg.threads = g.threads;
            const auto result = complexity::theorem1_sweep(parse_model(sw_model), cfg);
            if (!sw_rows.empty()) {
                Global rows_out = g;
                rows_out.out_path = sw_rows;
                emit(report::sweep_rows_table(result), rows_out, out);
            }
            emit(report::sweep_summary_table(result, cfg.eps, cfg.delta), g, out);
        } else if (scan->parsed()) {
            const double delta = parse_real(sc_delta, "--delta");
            const double c = complexity::coarse_scheme_constant();
            Table t = sc_hist ? Table({"n", "delta", "value", "count"})
                              : Table({"n", "delta", "max", "argmax", "bound", "c_scheme", "strings"});
            for (std::uint64_t n : parse_n_list(sc_n, "--n")) {
                const auto r = complexity::max_coarse_scan(static_cast<unsigned>(std::min<std::uint64_t>(n, 64)), delta, g.threads);
                if (sc_hist) {
                    for (const auto& [value, count] : r.histogram) t.add_row({n, delta, value, count});
                } else {
                    const double bound = static_cast<double>(n) / 2.0 + std::log2(static_cast<double>(n)) + c;
                    t.add_row({n, delta, r.max_value, r.argmax.to_string(), bound, c, std::uint64_t{1} << n});
                }
            }
            emit(t, g, out);
        } else if (self->parsed()) {
            st.threads = g.threads;
            st.mutate_codec = st_mutate == "codec";
            return selftest::run(st, out) ? kOk : kDomain;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return kResource;
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
        return kResource;
    } catch (const DecodeError& e) {
        err << "decode error: " << e.what() << '\n';
        return kDomain;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    }
    return kOk;
}

}  // namespace eclab::cli
