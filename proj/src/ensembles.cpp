#include "eclab/ensembles.hpp"

#include <cmath>
#include <limits>

#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/processes.hpp"

namespace eclab::ensembles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_length(std::uint64_t n) {
    if (n == 0) throw DomainError("ensembles are supported on strings of length n >= 1");
}

void require_quantized(unsigned m, std::uint64_t a, std::string_view what) {
    if (m == 0 || m > kMaxPrecision) throw DomainError("precision m must be in 1.." + std::to_string(kMaxPrecision));
    if (a == 0 || a >= (std::uint64_t{1} << m)) {
        throw DomainError(std::string(what) + " = " + std::to_string(a) + " must satisfy 0 < a < 2^" + std::to_string(m));
    }
}

double dyadic(unsigned m, std::uint64_t a) {
    return std::ldexp(static_cast<double>(a), -static_cast<int>(m));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view text, std::string_view key) {
    std::uint64_t v = 0;
    if (text.empty()) throw DomainError("missing value for '" + std::string(key) + "'");
    for (char c : text) {
        if (c < '0' || c > '9') throw DomainError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

}  // namespace

std::string_view tag_name(Tag tag) {
    switch (tag) {
        case Tag::SingletonRaw: return "singleton-raw";
        case Tag::SingletonLZ: return "singleton-lz";
        case Tag::UniformAll: return "uniform-all";
        case Tag::UniformTypical: return "uniform-typ";
        case Tag::IIDQuantized: return "iid";
        case Tag::MarkovQuantized: return "markov-q";
    }
    return "unknown";
}

// ---- kernels ---------------------------------------------------------------

std::uint64_t header_length(std::uint64_t n) {
    return kTagBits + codec::nat_length(n);
}

std::uint64_t iid_desc_len(std::uint64_t n, unsigned m) {
    return header_length(n) + codec::nat_length(m) + m;
}

std::uint64_t markov_desc_len(std::uint64_t n, unsigned m) {
    return header_length(n) + codec::nat_length(m) + 3ULL * m;
}

std::uint64_t uniform_typical_desc_len(std::uint64_t n, const Rational& r) {
    return header_length(n) + codec::rational_length(r);
}

double quantized_cost(unsigned m, std::uint64_t a) {
    return static_cast<double>(m) - std::log2(static_cast<double>(a));
}

TransitionCounts TransitionCounts::of(const BitString& x) {
    TransitionCounts c;
    if (x.empty()) return c;
    c.first = x[0];
    const auto s = x.symbols();
    for (std::size_t i = 1; i < s.size(); ++i) {
        switch ((s[i - 1] << 1) | s[i]) {
            case 0: ++c.c00; break;
            case 1: ++c.c01; break;
            case 2: ++c.c10; break;
            default: ++c.c11; break;
        }
    }
    return c;
}

double iid_neg_log2(std::uint64_t n, std::uint64_t ones, unsigned m, std::uint64_t a) {
    const std::uint64_t full = std::uint64_t{1} << m;
    return static_cast<double>(ones) * quantized_cost(m, a) + static_cast<double>(n - ones) * quantized_cost(m, full - a);
}

double iid_entropy(std::uint64_t n, unsigned m, std::uint64_t a) {
    return static_cast<double>(n) * processes::binary_entropy(dyadic(m, a));
}

double markov_neg_log2(const TransitionCounts& c, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q) {
    const std::uint64_t full = std::uint64_t{1} << m;
    const double init = c.first ? quantized_cost(m, q) : quantized_cost(m, full - q);
    const double from0 = static_cast<double>(c.c00) * quantized_cost(m, full - a0) + static_cast<double>(c.c01) * quantized_cost(m, a0);
    const double from1 = static_cast<double>(c.c10) * quantized_cost(m, a1) + static_cast<double>(c.c11) * quantized_cost(m, full - a1);
    return (init + from0) + from1;
}

double markov_entropy(std::uint64_t n, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q) {
    const double p01 = dyadic(m, a0);
    const double p10 = dyadic(m, a1);
    const double p1 = dyadic(m, q);
    // P(X_{t+1} = 1) = pi1 + lambda (P(X_t = 1) - pi1); ones = sum_{t=1}^{n-1} P(X_t = 1).
    const double lambda = 1.0 - p01 - p10;
    const double pi1 = p01 / (p01 + p10);
    const double steps = static_cast<double>(n - 1);
    const double geometric = n >= 2 ? (1.0 - std::pow(lambda, steps)) / (p01 + p10) : 0.0;
    const double ones = steps * pi1 + (p1 - pi1) * geometric;
    const double zeros = steps - ones;
    return processes::binary_entropy(p1) + zeros * processes::binary_entropy(p01) + ones * processes::binary_entropy(p10);
}

std::uint64_t code_length_bits(double neg_log2) {
    const double nearest = std::round(neg_log2);
    if (std::abs(neg_log2 - nearest) <= kComparisonSlack) return static_cast<std::uint64_t>(std::max(nearest, 0.0));
    return static_cast<std::uint64_t>(std::ceil(neg_log2));
}

// ---- construction ----------------------------------------------------------

Ensemble Ensemble::singleton_raw(BitString x) {
    require_length(x.size());
    return Ensemble(SingletonRawParams{std::move(x)});
}

Ensemble Ensemble::singleton_lz(BitString x) {
    require_length(x.size());
    const std::uint64_t len = lz78::code_len(x);
    return Ensemble(SingletonLZParams{std::move(x), len});
}

Ensemble Ensemble::uniform_all(std::uint64_t n) {
    require_length(n);
    return Ensemble(UniformAllParams{n});
}

Ensemble Ensemble::uniform_typical(const typical_sets::TypicalSetSpec& spec, unsigned n_max) {
    UniformTypicalParams p{spec.r(), spec.n(), std::nullopt};
    if (spec.n() <= n_max) {
        p.cardinality = typical_sets::cardinality(spec, n_max);
        if (*p.cardinality == 0) {
            throw DomainError("T_{r,n} is empty for r = " + spec.r().to_string() + ", n = " + std::to_string(spec.n()));
        }
    }
    return Ensemble(std::move(p));
}

Ensemble Ensemble::iid_quantized(std::uint64_t n, unsigned m, std::uint64_t a) {
    require_length(n);
    require_quantized(m, a, "a");
    return Ensemble(IIDParams{n, m, a});
}

Ensemble Ensemble::markov_quantized(std::uint64_t n, unsigned m, std::uint64_t a0, std::uint64_t a1, std::uint64_t q) {
    require_length(n);
    require_quantized(m, a0, "a0");
    require_quantized(m, a1, "a1");
    require_quantized(m, q, "q");
    return Ensemble(MarkovParams{n, m, a0, a1, q});
}

// ---- queries ---------------------------------------------------------------

std::uint64_t Ensemble::length() const {
    return std::visit(Overloaded{
                          [](const SingletonRawParams& p) -> std::uint64_t { return p.x.size(); },
                          [](const SingletonLZParams& p) -> std::uint64_t { return p.x.size(); },
                          [](const auto& p) -> std::uint64_t { return p.n; },
                      },
                      params_);
}

bool Ensemble::has_exact_entropy() const {
    const auto* ut = std::get_if<UniformTypicalParams>(&params_);
    return ut == nullptr || ut->cardinality.has_value();
}

double Ensemble::neg_log2_prob(const BitString& x) const {
    if (x.size() != length()) return kInf;
    return std::visit(Overloaded{
                          [&](const SingletonRawParams& p) { return x == p.x ? 0.0 : kInf; },
                          [&](const SingletonLZParams& p) { return x == p.x ? 0.0 : kInf; },
                          [&](const UniformAllParams& p) { return static_cast<double>(p.n); },
                          [&](const UniformTypicalParams& p) {
                              const typical_sets::TypicalSetSpec spec(p.r, p.n);
                              if (!typical_sets::contains(spec, x)) return kInf;
                              if (!p.cardinality) throw ResourceError("|T_{r,n}| unresolved for n = " + std::to_string(p.n));
                              return std::log2(static_cast<double>(*p.cardinality));
                          },
                          [&](const IIDParams& p) { return iid_neg_log2(p.n, x.count_ones(), p.m, p.a); },
                          [&](const MarkovParams& p) { return markov_neg_log2(TransitionCounts::of(x), p.m, p.a0, p.a1, p.q); },
                      },
                      params_);
}

double Ensemble::prob(const BitString& x) const {
    if (const auto* ut = std::get_if<UniformTypicalParams>(&params_)) {
        if (x.size() != ut->n || !typical_sets::contains(typical_sets::TypicalSetSpec(ut->r, ut->n), x)) return 0.0;
        if (!ut->cardinality) throw ResourceError("|T_{r,n}| unresolved for n = " + std::to_string(ut->n));
        return 1.0 / static_cast<double>(*ut->cardinality);
    }
    const double v = neg_log2_prob(x);
    return v == kInf ? 0.0 : std::exp2(-v);
}

double Ensemble::entropy() const {
    return std::visit(Overloaded{
                          [](const SingletonRawParams&) { return 0.0; },
                          [](const SingletonLZParams&) { return 0.0; },
                          [](const UniformAllParams& p) { return static_cast<double>(p.n); },
                          [](const UniformTypicalParams& p) {
                              if (!p.cardinality) throw ResourceError("|T_{r,n}| unresolved for n = " + std::to_string(p.n));
                              return std::log2(static_cast<double>(*p.cardinality));
                          },
                          [](const IIDParams& p) { return iid_entropy(p.n, p.m, p.a); },
                          [](const MarkovParams& p) { return markov_entropy(p.n, p.m, p.a0, p.a1, p.q); },
                      },
                      params_);
}

std::uint64_t Ensemble::desc_len() const {
    return std::visit(Overloaded{
                          [](const SingletonRawParams& p) { return header_length(p.x.size()) + p.x.size(); },
                          [](const SingletonLZParams& p) { return header_length(p.x.size()) + p.lz_len; },
                          [](const UniformAllParams& p) { return header_length(p.n); },
                          [](const UniformTypicalParams& p) { return uniform_typical_desc_len(p.n, p.r); },
                          [](const IIDParams& p) { return iid_desc_len(p.n, p.m); },
                          [](const MarkovParams& p) { return markov_desc_len(p.n, p.m); },
                      },
                      params_);
}

void Ensemble::append_serialization(BitString& out) const {
    out.append_bits(static_cast<std::uint64_t>(tag()), kTagBits);
    std::visit(Overloaded{
                   [&](const SingletonRawParams& p) {
                       codec::append_nat(out, p.x.size());
                       out.append(p.x);
                   },
                   [&](const SingletonLZParams& p) { lz78::append_encoding(out, p.x); },
                   [&](const UniformAllParams& p) { codec::append_nat(out, p.n); },
                   [&](const UniformTypicalParams& p) {
                       codec::append_nat(out, p.n);
                       codec::append_rational(out, p.r);
                   },
                   [&](const IIDParams& p) {
                       codec::append_nat(out, p.n);
                       codec::append_nat(out, p.m);
                       out.append_bits(p.a, p.m);
                   },
                   [&](const MarkovParams& p) {
                       codec::append_nat(out, p.n);
                       codec::append_nat(out, p.m);
                       out.append_bits(p.a0, p.m);
                       out.append_bits(p.a1, p.m);
                       out.append_bits(p.q, p.m);
                   },
               },
               params_);
}

BitString Ensemble::serialize() const {
    BitString out;
    append_serialization(out);
    return out;
}

std::string Ensemble::params_string() const {
    return std::visit(Overloaded{
                          [](const SingletonRawParams& p) { return "x=" + p.x.to_string(); },
                          [](const SingletonLZParams& p) { return "x=" + p.x.to_string(); },
                          [](const UniformAllParams& p) { return "n=" + std::to_string(p.n); },
                          [](const UniformTypicalParams& p) { return "r=" + p.r.to_string() + ",n=" + std::to_string(p.n); },
                          [](const IIDParams& p) {
                              return "n=" + std::to_string(p.n) + ",m=" + std::to_string(p.m) + ",a=" + std::to_string(p.a);
                          },
                          [](const MarkovParams& p) {
                              return "n=" + std::to_string(p.n) + ",m=" + std::to_string(p.m) + ",a0=" + std::to_string(p.a0) +
                                     ",a1=" + std::to_string(p.a1) + ",q=" + std::to_string(p.q);
                          },
                      },
                      params_);
}

std::string Ensemble::to_string() const {
    return std::string(tag_name(tag())) + ":" + params_string();
}

bool is_delta_typical(const Ensemble& e, const BitString& x, double delta) {
    if (delta < 0.0) throw DomainError("delta must be nonnegative");
    const double cost = e.neg_log2_prob(x);
    if (cost == kInf) return false;
    return cost <= e.entropy() * (1.0 + delta) + kComparisonSlack;
}

// ---- decoding --------------------------------------------------------------

Ensemble read_ensemble(codec::BitReader& reader, unsigned n_max) {
    const auto tag = reader.read_bits(kTagBits);
    try {
        switch (static_cast<Tag>(tag)) {
            case Tag::SingletonRaw: {
                const std::uint64_t n = codec::read_nat(reader);
                if (n > reader.remaining()) throw DecodeError("singleton payload truncated");
                BitString x;
                x.reserve(n);
                for (std::uint64_t i = 0; i < n; ++i) x.push_back(reader.read_bit());
                return Ensemble::singleton_raw(std::move(x));
            }
            case Tag::SingletonLZ: return Ensemble::singleton_lz(lz78::read_encoding(reader));
            case Tag::UniformAll: return Ensemble::uniform_all(codec::read_nat(reader));
            case Tag::UniformTypical: {
                const std::uint64_t n = codec::read_nat(reader);
                const Rational r = codec::read_rational(reader);
                return Ensemble::uniform_typical(typical_sets::TypicalSetSpec(r, n), n_max);
            }
            case Tag::IIDQuantized: {
                const std::uint64_t n = codec::read_nat(reader);
                const std::uint64_t m = codec::read_nat(reader);
                if (m > kMaxPrecision) throw DecodeError("precision field out of range");
                const auto mu = static_cast<unsigned>(m);
                return Ensemble::iid_quantized(n, mu, reader.read_bits(mu));
            }
            case Tag::MarkovQuantized: {
                const std::uint64_t n = codec::read_nat(reader);
                const std::uint64_t m = codec::read_nat(reader);
                if (m > kMaxPrecision) throw DecodeError("precision field out of range");
                const auto mu = static_cast<unsigned>(m);
                const std::uint64_t a0 = reader.read_bits(mu);
                const std::uint64_t a1 = reader.read_bits(mu);
                const std::uint64_t q = reader.read_bits(mu);
                return Ensemble::markov_quantized(n, mu, a0, a1, q);
            }
        }
    } catch (const DomainError& e) {
        throw DecodeError(std::string("invalid ensemble parameters: ") + e.what());
    }
    throw DecodeError("unknown ensemble tag " + std::to_string(tag));
}

Ensemble decode_ensemble(const BitString& bits, unsigned n_max) {
    codec::BitReader reader(bits);
    Ensemble e = read_ensemble(reader, n_max);
    if (!reader.at_end()) throw DecodeError("trailing bits after ensemble serialization");
    return e;
}

Ensemble parse_ensemble(std::string_view text, unsigned n_max) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw DomainError("ensemble text needs '<tag>:<params>'");
    const std::string_view name = trim(text.substr(0, colon));
    std::string_view rest = text.substr(colon + 1);
    std::vector<std::pair<std::string_view, std::string_view>> kv;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw DomainError("expected key=value in '" + std::string(item) + "'");
        kv.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    auto get = [&](std::string_view key) -> std::string_view {
        for (const auto& [k, v] : kv) {
            if (k == key) return v;
        }
        throw DomainError("ensemble '" + std::string(name) + "' missing parameter '" + std::string(key) + "'");
    };
    auto num = [&](std::string_view key) { return parse_u64(get(key), key); };
    auto precision = [&]() {
        const auto m = num("m");
        if (m > kMaxPrecision) throw DomainError("precision m out of range");
        return static_cast<unsigned>(m);
    };
    if (name == "singleton-raw") return Ensemble::singleton_raw(BitString::from_text(get("x")));
    if (name == "singleton-lz") return Ensemble::singleton_lz(BitString::from_text(get("x")));
    if (name == "uniform-all") return Ensemble::uniform_all(num("n"));
    if (name == "uniform-typ") {
        return Ensemble::uniform_typical(typical_sets::TypicalSetSpec(Rational::parse(get("r")), num("n")), n_max);
    }
    if (name == "iid") return Ensemble::iid_quantized(num("n"), precision(), num("a"));
    if (name == "markov-q") return Ensemble::markov_quantized(num("n"), precision(), num("a0"), num("a1"), num("q"));
    throw DomainError("unknown ensemble tag '" + std::string(name) + "'");
}

}  // namespace eclab::ensembles
