#include "eclab/processes.hpp"

#include <cmath>
#include <sstream>

#include "eclab/errors.hpp"
#include "eclab/rng.hpp"

namespace eclab::processes {

namespace {

const Rational kOne(1, 1);

void require_probability(const Rational& p, std::string_view what) {
    if (p > kOne) throw DomainError(std::string(what) + " = " + p.to_string() + " exceeds 1");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// "k1=v1,k2=v2" -> pairs, in order.
std::vector<std::pair<std::string_view, std::string_view>> key_values(std::string_view s) {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    if (trim(s).empty()) return out;
    for (auto item : split(s, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw DomainError("expected key=value, got '" + std::string(item) + "'");
        out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    return out;
}

std::array<Rational, 2> parse_row(std::string_view text, char sep) {
    auto cells = split(text, sep);
    std::vector<std::string_view> nonempty;
    for (auto c : cells) {
        if (!c.empty()) nonempty.push_back(c);
    }
    if (nonempty.size() != 2) throw DomainError("transition row needs two entries: '" + std::string(text) + "'");
    return {Rational::parse(nonempty[0]), Rational::parse(nonempty[1])};
}

ProcessModel parse_inline(std::string_view text) {
    text = trim(text);
    const auto colon = text.find(':');
    const std::string_view variant = trim(text.substr(0, colon));
    const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (variant == "bernoulli") {
        auto kv = key_values(body);
        if (kv.size() != 1 || kv[0].first != "p") throw DomainError("bernoulli model needs exactly p=a/b");
        return ProcessModel::bernoulli(Rational::parse(kv[0].second));
    }
    if (variant == "markov") {
        auto kv = key_values(body);
        if (kv.size() == 1 && kv[0].first == "flip") return ProcessModel::markov_flip(Rational::parse(kv[0].second));
        if (kv.size() == 2 && kv[0].first == "p01" && kv[1].first == "p10") {
            return ProcessModel::markov(Rational::parse(kv[0].second), Rational::parse(kv[1].second));
        }
        if (kv.size() == 2 && kv[0].first == "row0" && kv[1].first == "row1") {
            return ProcessModel::markov_rows({parse_row(kv[0].second, '|'), parse_row(kv[1].second, '|')});
        }
        throw DomainError("markov model needs flip=, p01=,p10= or row0=,row1=");
    }
    if (variant == "mixture") {
        std::vector<Rational> weights;
        std::vector<ProcessModel> parts;
        for (auto item : split(body, ';')) {
            const auto at = item.find('@');
            if (at == std::string_view::npos) throw DomainError("mixture component needs weight@model: '" + std::string(item) + "'");
            weights.push_back(Rational::parse(trim(item.substr(0, at))));
            parts.push_back(parse_inline(item.substr(at + 1)));
        }
        return ProcessModel::mixture(std::move(weights), std::move(parts));
    }
    throw DomainError("unknown process variant '" + std::string(variant) + "'");
}

// Multi-line "key = value" document; '#' starts a comment.
ProcessModel parse_document(std::string_view text) {
    std::string variant;
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string_view l = line;
        if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = trim(l);
        if (l.empty()) continue;
        const auto eq = l.find('=');
        if (eq == std::string_view::npos) throw DomainError("model document line without '=': '" + std::string(l) + "'");
        std::string key(trim(l.substr(0, eq)));
        std::string value(trim(l.substr(eq + 1)));
        if (key == "variant") {
            variant = value;
        } else {
            entries.emplace_back(std::move(key), std::move(value));
        }
    }
    auto single = [&](std::string_view key) -> const std::string& {
        const std::string* found = nullptr;
        for (const auto& [k, v] : entries) {
            if (k == key) {
                if (found) throw DomainError("duplicate key '" + std::string(key) + "'");
                found = &v;
            }
        }
        if (!found) throw DomainError("model document missing '" + std::string(key) + "'");
        return *found;
    };
    if (variant == "bernoulli") return ProcessModel::bernoulli(Rational::parse(single("p")));
    if (variant == "markov") {
        for (const auto& [k, v] : entries) {
            if (k == "flip") return ProcessModel::markov_flip(Rational::parse(v));
            if (k == "p01") return ProcessModel::markov(Rational::parse(v), Rational::parse(single("p10")));
        }
        return ProcessModel::markov_rows({parse_row(single("row0"), ' '), parse_row(single("row1"), ' ')});
    }
    if (variant == "mixture") {
        std::vector<Rational> weights;
        std::vector<ProcessModel> parts;
        for (const auto& [k, v] : entries) {
            if (k != "component") throw DomainError("unexpected key '" + k + "' in mixture document");
            std::string_view item = v;
            const auto space = item.find(' ');
            if (space == std::string_view::npos) throw DomainError("component needs '<weight> <model>': '" + v + "'");
            weights.push_back(Rational::parse(item.substr(0, space)));
            parts.push_back(parse_inline(item.substr(space + 1)));
        }
        return ProcessModel::mixture(std::move(weights), std::move(parts));
    }
    throw DomainError("model document has unknown or missing variant '" + variant + "'");
}

double markov_block_prob(const Markov& m, const BitString& x) {
    const TransitionMatrix t = transition_matrix(m);
    const auto pi = stationary_dist(t);
    double p = pi[x[0] ? 1 : 0];
    for (std::size_t i = 1; i < x.size(); ++i) p *= t[x[i - 1] ? 1 : 0][x[i] ? 1 : 0];
    return p;
}

void fill_ergodic(const ProcessModel& m, std::size_t n, SplitMix64& rng, BitString& out) {
    if (const auto* b = std::get_if<Bernoulli>(&m.variant())) {
        const double p = b->p.value();
        for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform() < p);
        return;
    }
    const auto& mk = std::get<Markov>(m.variant());
    const double p01 = mk.p01.value();
    const double p10 = mk.p10.value();
    const auto pi = stationary_dist(transition_matrix(mk));
    bool state = rng.uniform() < pi[1];
    out.push_back(state);
    for (std::size_t i = 1; i < n; ++i) {
        const double u = rng.uniform();
        state = state ? !(u < p10) : (u < p01);
        out.push_back(state);
    }
}

}  // namespace

ProcessModel ProcessModel::bernoulli(Rational p) {
    require_probability(p, "p");
    return ProcessModel(Bernoulli{p});
}

ProcessModel ProcessModel::markov(Rational p01, Rational p10) {
    require_probability(p01, "p01");
    require_probability(p10, "p10");
    if (p01.is_zero()) throw DomainError("Markov chain is reducible: state 0 is absorbing (p01 = 0)");
    if (p10.is_zero()) throw DomainError("Markov chain is reducible: state 1 is absorbing (p10 = 0)");
    return ProcessModel(Markov{p01, p10});
}

ProcessModel ProcessModel::markov_rows(const std::array<std::array<Rational, 2>, 2>& rows) {
    for (std::size_t s = 0; s < 2; ++s) {
        if (rows[s][0] + rows[s][1] != kOne) {
            throw DomainError("transition row " + std::to_string(s) + " sums to " + (rows[s][0] + rows[s][1]).to_string());
        }
    }
    return markov(rows[0][1], rows[1][0]);
}

ProcessModel ProcessModel::mixture(std::vector<Rational> weights, std::vector<ProcessModel> parts) {
    if (weights.empty() || weights.size() != parts.size()) throw DomainError("mixture needs one weight per component");
    Rational total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].is_zero()) throw DomainError("mixture weight " + std::to_string(i) + " is zero");
        total = total + weights[i];
        if (!parts[i].is_ergodic()) throw DomainError("mixture component " + std::to_string(i) + " is itself a mixture");
        if (const auto* mk = std::get_if<Markov>(&parts[i].model_); mk && mk->p01 == kOne && mk->p10 == kOne) {
            throw DomainError("mixture component " + std::to_string(i) + " is a periodic chain");
        }
    }
    if (total != kOne) throw DomainError("mixture weights sum to " + total.to_string());
    return ProcessModel(Mixture{std::move(weights), std::move(parts)});
}

ProcessModel ProcessModel::parse(std::string_view text) {
    if (text.find('\n') != std::string_view::npos || trim(text).starts_with("variant")) return parse_document(text);
    return parse_inline(text);
}

std::string ProcessModel::to_string() const {
    if (const auto* b = std::get_if<Bernoulli>(&model_)) return "bernoulli:p=" + b->p.to_string();
    if (const auto* m = std::get_if<Markov>(&model_)) {
        return "markov:p01=" + m->p01.to_string() + ",p10=" + m->p10.to_string();
    }
    const auto& mix = std::get<Mixture>(model_);
    std::string out = "mixture:";
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        if (i) out += ';';
        out += mix.weights[i].to_string() + "@" + mix.components[i].to_string();
    }
    return out;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

TransitionMatrix transition_matrix(const Markov& m) {
    const double p01 = m.p01.value();
    const double p10 = m.p10.value();
    return {{{1.0 - p01, p01}, {p10, 1.0 - p10}}};
}

std::array<double, 2> stationary_dist(const TransitionMatrix& t) {
    for (std::size_t s = 0; s < 2; ++s) {
        if (t[s][0] < 0.0 || t[s][1] < 0.0 || std::abs(t[s][0] + t[s][1] - 1.0) > 1e-12) {
            throw DomainError("transition row " + std::to_string(s) + " is not a probability distribution");
        }
    }
    if (t[0][1] == 0.0) throw DomainError("Markov chain is reducible: state 0 is absorbing");
    if (t[1][0] == 0.0) throw DomainError("Markov chain is reducible: state 1 is absorbing");
    const double total = t[0][1] + t[1][0];
    return {t[1][0] / total, t[0][1] / total};
}

double entropy_rate(const ProcessModel& m) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                return binary_entropy(v.p.value());
            } else if constexpr (std::is_same_v<T, Markov>) {
                const auto pi = stationary_dist(transition_matrix(v));
                return pi[0] * binary_entropy(v.p01.value()) + pi[1] * binary_entropy(v.p10.value());
            } else {
                double rate = 0.0;
                for (std::size_t i = 0; i < v.components.size(); ++i) {
                    rate += v.weights[i].value() * entropy_rate(v.components[i]);
                }
                return rate;
            }
        },
        m.variant());
}

double block_prob(const ProcessModel& m, const BitString& x) {
    if (x.empty()) throw DomainError("block probability of the empty string");
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                const double p = v.p.value();
                const auto ones = static_cast<double>(x.count_ones());
                const auto zeros = static_cast<double>(x.size()) - ones;
                return std::pow(p, ones) * std::pow(1.0 - p, zeros);
            } else if constexpr (std::is_same_v<T, Markov>) {
                return markov_block_prob(v, x);
            } else {
                double p = 0.0;
                for (std::size_t i = 0; i < v.components.size(); ++i) {
                    p += v.weights[i].value() * block_prob(v.components[i], x);
                }
                return p;
            }
        },
        m.variant());
}

std::vector<WeightedComponent> components(const ProcessModel& m) {
    if (const auto* mix = std::get_if<Mixture>(&m.variant())) {
        std::vector<WeightedComponent> out;
        for (std::size_t i = 0; i < mix->components.size(); ++i) out.push_back({mix->weights[i], mix->components[i]});
        return out;
    }
    return {{Rational(1, 1), m}};
}

SamplePath sample_path(const ProcessModel& m, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample length must be >= 1");
    SplitMix64 rng(seed);
    SamplePath path;
    path.bits.reserve(n);
    const ProcessModel* source = &m;
    if (const auto* mix = std::get_if<Mixture>(&m.variant())) {
        const double u = rng.uniform();
        double cumulative = 0.0;
        path.component = mix->components.size() - 1;
        for (std::size_t i = 0; i < mix->components.size(); ++i) {
            cumulative += mix->weights[i].value();
            if (u < cumulative) {
                path.component = i;
                break;
            }
        }
        source = &mix->components[path.component];
    }
    fill_ergodic(*source, n, rng, path.bits);
    return path;
}

BitString sample(const ProcessModel& m, std::size_t n, std::uint64_t seed) {
    return sample_path(m, n, seed).bits;
}

}  // namespace eclab::processes
