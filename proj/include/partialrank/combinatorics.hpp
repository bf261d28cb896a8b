#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "partialrank/core.hpp"
#include "partialrank/random.hpp"

namespace partialrank {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(std::size_t n);

/// Order-preserving interleavings of two lists of lengths a and b: C(a+b, a).
BigInt shuffle_count(std::size_t a, std::size_t b);

/// Ordered selections of a items out of b: b!/(b-a)!. Throws ValidationError if a > b.
BigInt variation_count(std::size_t a, std::size_t b);

/// Linear extensions of a k-chain among n items: n!/k!. Throws ValidationError if k > n.
BigInt total_compatible(std::size_t n, std::size_t k);

// Probability that an unobserved item i precedes an observed item j in a
// uniformly random completion of a k-chain over n items, where r is the number
// of observed items strictly above j. Valid for 1 <= k <= n-1, 0 <= r <= k-1.
//
// Three independent routes are kept:
//   p_shuffle_sum_*  count completions by position of j (head/tail shuffles),
//   p_gap_identity   the closed form (r+1)/(k+1),
// and the enumeration oracle in the tests.

/// Throws ValidationError when (n, k, r) is outside the valid range.
void validate_pnkr(std::size_t n, std::size_t k, std::size_t r);

/// Head/tail shuffle sum in exact arithmetic.
Rational p_shuffle_sum_exact(std::size_t n, std::size_t k, std::size_t r);

/// The same sum evaluated term by term in log space.
double p_shuffle_sum_float(std::size_t n, std::size_t k, std::size_t r);

/// (r+1)/(k+1), exact.
Rational p_gap_identity(std::size_t n, std::size_t k, std::size_t r);

/// Production fast path: (r+1)/(k+1) as a double.
double p_unobserved_beats_observed(std::size_t n, std::size_t k, std::size_t r);

enum class PSource {
    gap_identity,  ///< O(1) per entry
    shuffle_sum,   ///< O(n) per entry; cross-check
};

struct PTableOptions {
    std::size_t exact_threshold = 64;  ///< entries with n <= this also keep an exact rational
    PSource source = PSource::gap_identity;
};

/// p(n, k, r) for every 2 <= n <= n_max, 1 <= k <= n-1, 0 <= r <= k-1.
class PTable {
public:
    PTable() = default;

    std::size_t n_max() const noexcept { return n_max_; }
    std::size_t exact_threshold() const noexcept { return exact_threshold_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(std::size_t n, std::size_t k, std::size_t r) const;
    double value(std::size_t n, std::size_t k, std::size_t r) const;
    /// Exact value, or nullopt when n is above the exact threshold.
    std::optional<Rational> exact(std::size_t n, std::size_t k, std::size_t r) const;

    struct Entry {
        std::size_t n, k, r;
    };
    /// All (n, k, r) keys in storage order.
    std::vector<Entry> keys() const;

private:
    friend PTable build_p_table(std::size_t, const PTableOptions&);
    std::size_t offset(std::size_t n, std::size_t k, std::size_t r) const;

    std::size_t n_max_ = 0;
    std::size_t exact_threshold_ = 0;
    std::vector<std::size_t> base_;  // base_[n] = first slot of block n
    std::vector<double> values_;
    std::vector<Rational> exact_;  // prefix of values_ covering n <= exact_threshold
};

/// Throws ValidationError if n_max < 2.
PTable build_p_table(std::size_t n_max, const PTableOptions& options = {});

/// Largest universe accepted by the exhaustive enumeration.
inline constexpr std::size_t kEnumerationLimit = 10;

/// Visits every completion of `pr` (orderings best first). Throws GuardError above the limit.
void for_each_compatible(const PartialRanking& pr,
                         const std::function<void(const std::vector<SystemId>&)>& visit);

std::vector<Ranking> enumerate_compatible(const PartialRanking& pr);

/// Uniformly random interleaving of `a` and `b` preserving each list's order.
std::vector<SystemId> shuffle_lists(const std::vector<SystemId>& a, const std::vector<SystemId>& b,
                                    Engine& rng);

/// Uniformly random completion of `pr`.
Ranking sample_compatible(const PartialRanking& pr, Engine& rng);
Ranking sample_compatible(const PartialRanking& pr, std::uint64_t seed);

}  // namespace partialrank
