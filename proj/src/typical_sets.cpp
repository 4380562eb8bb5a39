#include "eclab/typical_sets.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "eclab/errors.hpp"
#include "eclab/lz78.hpp"
#include "eclab/parallel.hpp"
#include "eclab/rng.hpp"

namespace eclab::typical_sets {

namespace {

void require_enumerable(std::uint64_t n, unsigned n_max) {
    if (n > n_max || n > 62) {
        throw ResourceError("exhaustive enumeration of {0,1}^" + std::to_string(n) + " exceeds n_max = " +
                            std::to_string(n_max));
    }
}

// Chunks of the 2^n index space handed to workers.
constexpr std::size_t kChunk = std::size_t{1} << 14;

}  // namespace

TypicalSetSpec::TypicalSetSpec(Rational r, std::uint64_t n) : r_(r), n_(n) {
    if (r.is_zero()) throw DomainError("typical set threshold r must be positive");
    if (n == 0) throw DomainError("typical set block length n must be >= 1");
}

bool TypicalSetSpec::admits_code_len(std::uint64_t code_len) const {
    return static_cast<unsigned __int128>(code_len) * r_.den() < static_cast<unsigned __int128>(r_.num()) * n_;
}

std::uint64_t TypicalSetSpec::ceil_rn() const {
    const unsigned __int128 num = static_cast<unsigned __int128>(r_.num()) * n_;
    return static_cast<std::uint64_t>((num + r_.den() - 1) / r_.den());
}

bool contains(const TypicalSetSpec& s, const BitString& x) {
    if (x.size() != s.n()) {
        throw DomainError("string of length " + std::to_string(x.size()) + " tested against T_{r,n} with n = " +
                          std::to_string(s.n()));
    }
    return s.admits_code_len(lz78::code_len(x));
}

std::vector<BitString> enumerate(const TypicalSetSpec& s, unsigned n_max, unsigned threads) {
    require_enumerable(s.n(), n_max);
    const auto n = static_cast<unsigned>(s.n());
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
    std::vector<std::vector<std::uint64_t>> found(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
        for (std::uint64_t w = c * kChunk; w < end; ++w) {
            if (s.admits_code_len(lz78::code_len_word(w, n))) found[c].push_back(w);
        }
    });
    std::vector<BitString> out;
    for (const auto& chunk : found) {
        for (std::uint64_t w : chunk) out.push_back(BitString::from_word(w, n));
    }
    return out;
}

const std::vector<std::uint64_t>& code_len_histogram(unsigned n, unsigned n_max, unsigned threads) {
    require_enumerable(n, n_max);
    if (n == 0) throw DomainError("typical set block length n must be >= 1");
    static std::mutex mutex;
    static std::map<unsigned, std::unique_ptr<const std::vector<std::uint64_t>>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return *it->second;
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
    // code_len(x) <= stream_length(n, false) for every x of length n.
    const std::size_t bins = lz78::stream_length(n, false) + 1;
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(bins, 0));
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
        for (std::uint64_t w = c * kChunk; w < end; ++w) ++partial[c][lz78::code_len_word(w, n)];
    });
    auto hist = std::make_unique<std::vector<std::uint64_t>>(bins, 0);
    for (const auto& p : partial) {
        for (std::size_t b = 0; b < bins; ++b) (*hist)[b] += p[b];
    }
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(n, std::move(hist));
    return *it->second;
}

std::uint64_t cardinality(const TypicalSetSpec& s, unsigned n_max, unsigned threads) {
    require_enumerable(s.n(), n_max);
    const auto& hist = code_len_histogram(static_cast<unsigned>(s.n()), n_max, threads);
    std::uint64_t count = 0;
    for (std::size_t len = 0; len < hist.size() && s.admits_code_len(len); ++len) count += hist[len];
    return count;
}

double empirical_prob(const TypicalSetSpec& s, const processes::ProcessModel& m, std::size_t samples,
                      std::uint64_t seed, unsigned threads) {
    if (samples == 0) throw DomainError("empirical_prob needs at least one sample");
    std::vector<std::uint8_t> hit(samples, 0);
    parallel_for(samples, threads, [&](std::size_t i) {
        const BitString x = processes::sample(m, static_cast<std::size_t>(s.n()), stream_seed(seed, i));
        hit[i] = contains(s, x) ? 1 : 0;
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(samples);
}

}  // namespace eclab::typical_sets
