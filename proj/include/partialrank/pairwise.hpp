#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "partialrank/combinatorics.hpp"
#include "partialrank/core.hpp"

namespace partialrank {

/// N x N matrix with entry (i, j) = P(i ranked above j). The diagonal holds 0.5
/// and is ignored downstream.
template <typename T>
class BasicPairwiseMatrix {
public:
    BasicPairwiseMatrix() = default;
    explicit BasicPairwiseMatrix(std::size_t n) : n_(n), entries_(n * n, T(1) / T(2)) {}

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const std::vector<T>& entries() const noexcept { return entries_; }

    bool operator==(const BasicPairwiseMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<T> entries_;
};

using PairwiseMatrix = BasicPairwiseMatrix<double>;
using ExactPairwiseMatrix = BasicPairwiseMatrix<Rational>;

/// Pairwise matrix of one partial ranking. Observed pairs are 0/1, unobserved
/// pairs 0.5, mixed pairs p(N, k, r) for the unobserved side.
PairwiseMatrix matrix_from_partial(const PartialRanking& pr);
/// Mixed entries looked up in `table`, which must cover N.
PairwiseMatrix matrix_from_partial(const PartialRanking& pr, const PTable& table);
ExactPairwiseMatrix matrix_from_partial_exact(const PartialRanking& pr);

inline constexpr std::size_t kMatrixOracleLimit = 8;

/// Exact pairwise proportions by enumerating every completion. Throws GuardError
/// above kMatrixOracleLimit systems.
ExactPairwiseMatrix matrix_from_partial_oracle(const PartialRanking& pr);

/// Sum of unit matrices plus direct-comparison bookkeeping.
///
/// Besides the floating `sums`, every unit's Borda row sums are kept exactly as
/// integer numerators per denominator (all unit entries have denominator 1, 2 or
/// k+1), so Borda ties are detected without rounding error.
class AccumulatedMatrix {
public:
    AccumulatedMatrix() = default;
    explicit AccumulatedMatrix(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t units() const noexcept { return units_; }

    double sum(std::size_t i, std::size_t j) const { return sums_[i * n_ + j]; }
    /// Units in which i was directly ranked above j.
    std::uint64_t direct_wins(std::size_t i, std::size_t j) const { return wins_[i * n_ + j]; }
    /// Units in which both i and j were observed (z_ij).
    std::uint64_t direct_count(std::size_t i, std::size_t j) const {
        return wins_[i * n_ + j] + wins_[j * n_ + i];
    }
    /// Units in which system i was observed.
    std::uint64_t observed_units(std::size_t i) const { return observed_[i]; }

    /// b_i = sum over j != i of sum(i, j), exact.
    Rational borda_score_exact(std::size_t i) const;
    std::vector<double> borda_scores() const;

    /// Adds one unit. Throws ValidationError on a universe mismatch.
    void add(const PartialRanking& pr);
    /// Adds one unit directly from scores (avoids building a PartialRanking).
    void add_scores(std::span<const double> values, std::span<const std::uint8_t> presence);
    /// Merges another accumulation over the same universe.
    void merge(const AccumulatedMatrix& other);

private:
    void add_chain(std::span<const SystemId> chain);

    std::size_t n_ = 0;
    std::size_t units_ = 0;
    std::vector<double> sums_;
    std::vector<std::uint64_t> wins_;
    std::vector<std::uint64_t> observed_;
    // row_num_[i * (n_ + 2) + d]: numerator over denominator d of b_i.
    std::vector<std::int64_t> row_num_;
    std::vector<std::uint32_t> scratch_pos_;
};

/// Throws ValidationError if universe sizes differ or `partials` is empty.
AccumulatedMatrix accumulate(std::span<const PartialRanking> partials);

}  // namespace partialrank
