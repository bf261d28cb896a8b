#include "partialrank/combinatorics.hpp"

#include <cmath>
#include <string>

#include "partialrank/errors.hpp"

namespace partialrank {

BigInt factorial(std::size_t n) {
    BigInt out = 1;
    for (std::size_t i = 2; i <= n; ++i) out *= i;
    return out;
}

BigInt shuffle_count(std::size_t a, std::size_t b) {
    // C(a+b, min(a,b)) by the multiplicative formula; each partial product is an integer.
    const std::size_t small = std::min(a, b);
    const std::size_t total = a + b;
    BigInt out = 1;
    for (std::size_t i = 1; i <= small; ++i) {
        out *= total - small + i;
        out /= i;
    }
    return out;
}

BigInt variation_count(std::size_t a, std::size_t b) {
    if (a > b) {
        throw ValidationError("variation_count: cannot select " + std::to_string(a) + " of " +
                              std::to_string(b) + " items");
    }
    BigInt out = 1;
    for (std::size_t i = b - a + 1; i <= b; ++i) out *= i;
    return out;
}

BigInt total_compatible(std::size_t n, std::size_t k) {
    if (k > n) {
        throw ValidationError("total_compatible: chain of " + std::to_string(k) + " longer than " +
                              std::to_string(n) + " items");
    }
    return factorial(n - k) * shuffle_count(k, n - k);
}

void validate_pnkr(std::size_t n, std::size_t k, std::size_t r) {
    if (k < 1 || k + 1 > n || r >= k) {
        throw ValidationError("p(n,k,r) requires 1 <= k <= n-1 and 0 <= r <= k-1; got (" + std::to_string(n) +
                              ", " + std::to_string(k) + ", " + std::to_string(r) + ")");
    }
}

// Completions with i before j are counted by how many of the other m-1
// unobserved items also land above j (call it h):
//   ordered pick of the h items                    V(h, m-1)
//   slot for i among them                          h+1
//   interleave those h+1 with the r chain items    S(r, h+1)
//   order the remaining unobserved items           (m-1-h)!
//   interleave them with the k-r-1 lower items     S(m-1-h, k-r-1)
Rational p_shuffle_sum_exact(std::size_t n, std::size_t k, std::size_t r) {
    validate_pnkr(n, k, r);
    const std::size_t m = n - k;
    BigInt hits = 0;
    for (std::size_t h = 0; h < m; ++h) {
        hits += variation_count(h, m - 1) * (h + 1) * shuffle_count(r, h + 1) * factorial(m - 1 - h) *
                shuffle_count(m - 1 - h, k - r - 1);
    }
    return Rational(hits, total_compatible(n, k));
}

namespace {

double log_shuffle(double a, double b) { return std::lgamma(a + b + 1) - std::lgamma(a + 1) - std::lgamma(b + 1); }

}  // namespace

double p_shuffle_sum_float(std::size_t n, std::size_t k, std::size_t r) {
    validate_pnkr(n, k, r);
    const double m = static_cast<double>(n - k);
    const double kk = static_cast<double>(k);
    const double rr = static_cast<double>(r);
    const double log_total = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(kk + 1);
    double p = 0.0;
    for (std::size_t hi = 0; hi < n - k; ++hi) {
        const double h = static_cast<double>(hi);
        const double log_term = (std::lgamma(m) - std::lgamma(m - h)) + std::log(h + 1) + log_shuffle(rr, h + 1) +
                                std::lgamma(m - h) + log_shuffle(m - 1 - h, kk - rr - 1);
        p += std::exp(log_term - log_total);
    }
    return p;
}

Rational p_gap_identity(std::size_t n, std::size_t k, std::size_t r) {
    validate_pnkr(n, k, r);
    return Rational(static_cast<long long>(r + 1), static_cast<long long>(k + 1));
}

double p_unobserved_beats_observed(std::size_t n, std::size_t k, std::size_t r) {
    validate_pnkr(n, k, r);
    return static_cast<double>(r + 1) / static_cast<double>(k + 1);
}

// ---------------------------------------------------------------------------

bool PTable::contains(std::size_t n, std::size_t k, std::size_t r) const {
    return n >= 2 && n <= n_max_ && k >= 1 && k < n && r < k;
}

std::size_t PTable::offset(std::size_t n, std::size_t k, std::size_t r) const {
    if (!contains(n, k, r)) {
        throw ValidationError("p table has no entry (" + std::to_string(n) + ", " + std::to_string(k) + ", " +
                              std::to_string(r) + ")");
    }
    return base_[n] + k * (k - 1) / 2 + r;
}

double PTable::value(std::size_t n, std::size_t k, std::size_t r) const { return values_[offset(n, k, r)]; }

std::optional<Rational> PTable::exact(std::size_t n, std::size_t k, std::size_t r) const {
    const auto i = offset(n, k, r);
    if (i >= exact_.size()) return std::nullopt;
    return exact_[i];
}

std::vector<PTable::Entry> PTable::keys() const {
    std::vector<Entry> out;
    out.reserve(values_.size());
    for (std::size_t n = 2; n <= n_max_; ++n)
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t r = 0; r < k; ++r) out.push_back({n, k, r});
    return out;
}

PTable build_p_table(std::size_t n_max, const PTableOptions& options) {
    if (n_max < 2) throw ValidationError("build_p_table: n_max must be at least 2");
    PTable table;
    table.n_max_ = n_max;
    table.exact_threshold_ = options.exact_threshold;
    table.base_.assign(n_max + 2, 0);
    for (std::size_t n = 2; n <= n_max; ++n) table.base_[n + 1] = table.base_[n] + n * (n - 1) / 2;
    table.values_.resize(table.base_[n_max + 1]);

    for (std::size_t n = 2; n <= n_max; ++n) {
        const bool keep_exact = n <= options.exact_threshold;
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t r = 0; r < k; ++r) {
                const std::size_t slot = table.base_[n] + k * (k - 1) / 2 + r;
                if (options.source == PSource::gap_identity) {
                    table.values_[slot] = p_unobserved_beats_observed(n, k, r);
                    if (keep_exact) table.exact_.push_back(p_gap_identity(n, k, r));
                } else if (keep_exact) {
                    Rational q = p_shuffle_sum_exact(n, k, r);
                    table.values_[slot] = static_cast<double>(q);
                    table.exact_.push_back(std::move(q));
                } else {
                    table.values_[slot] = p_shuffle_sum_float(n, k, r);
                }
            }
        }
    }
    return table;
}

// ---------------------------------------------------------------------------

namespace {

void check_enumerable(const PartialRanking& pr) {
    if (pr.universe_size() > kEnumerationLimit) {
        throw GuardError("exhaustive enumeration refused for " + std::to_string(pr.universe_size()) +
                         " systems (limit " + std::to_string(kEnumerationLimit) + ")");
    }
}

struct Extender {
    const std::vector<SystemId>& chain;
    std::vector<SystemId> free;
    std::vector<std::uint8_t> used;
    std::vector<SystemId> prefix;
    const std::function<void(const std::vector<SystemId>&)>& visit;

    void run(std::size_t next_chain) {
        if (prefix.size() == chain.size() + free.size()) {
            visit(prefix);
            return;
        }
        if (next_chain < chain.size()) {
            prefix.push_back(chain[next_chain]);
            run(next_chain + 1);
            prefix.pop_back();
        }
        for (std::size_t u = 0; u < free.size(); ++u) {
            if (used[u]) continue;
            used[u] = 1;
            prefix.push_back(free[u]);
            run(next_chain);
            prefix.pop_back();
            used[u] = 0;
        }
    }
};

std::vector<SystemId> unobserved_of(const PartialRanking& pr) {
    std::vector<std::uint8_t> seen(pr.universe_size(), 0);
    for (auto id : pr.ordered()) seen[id] = 1;
    std::vector<SystemId> out;
    for (std::size_t n = 0; n < seen.size(); ++n)
        if (!seen[n]) out.push_back(static_cast<SystemId>(n));
    return out;
}

}  // namespace

void for_each_compatible(const PartialRanking& pr, const std::function<void(const std::vector<SystemId>&)>& visit) {
    check_enumerable(pr);
    auto free = unobserved_of(pr);
    Extender ext{pr.ordered(), free, std::vector<std::uint8_t>(free.size(), 0), {}, visit};
    ext.prefix.reserve(pr.universe_size());
    ext.run(0);
}

std::vector<Ranking> enumerate_compatible(const PartialRanking& pr) {
    std::vector<Ranking> out;
    for_each_compatible(pr, [&](const std::vector<SystemId>& ordering) { out.emplace_back(ordering); });
    return out;
}

std::vector<SystemId> shuffle_lists(const std::vector<SystemId>& a, const std::vector<SystemId>& b, Engine& rng) {
    std::vector<SystemId> out;
    out.reserve(a.size() + b.size());
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
        const std::size_t left_a = a.size() - ia;
        const std::size_t left_b = b.size() - ib;
        // Taking from `a` with probability left_a / (left_a + left_b) makes all
        // C(a+b, a) interleavings equally likely.
        if (uniform_below(rng, left_a + left_b) < left_a) {
            out.push_back(a[ia++]);
        } else {
            out.push_back(b[ib++]);
        }
    }
    return out;
}

Ranking sample_compatible(const PartialRanking& pr, Engine& rng) {
    auto free = unobserved_of(pr);
    shuffle_in_place(std::span<SystemId>(free), rng);
    return Ranking(shuffle_lists(pr.ordered(), free, rng));
}

Ranking sample_compatible(const PartialRanking& pr, std::uint64_t seed) {
    Engine rng(seed);
    return sample_compatible(pr, rng);
}

}  // namespace partialrank
