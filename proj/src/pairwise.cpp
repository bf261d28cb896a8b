#include "partialrank/pairwise.hpp"

#include <algorithm>
#include <string>

#include "partialrank/errors.hpp"

namespace partialrank {

namespace {

template <typename T, typename MixedFn>
BasicPairwiseMatrix<T> build_matrix(const PartialRanking& pr, MixedFn mixed) {
    const std::size_t n = pr.universe_size();
    const std::size_t k = pr.observed_count();
    BasicPairwiseMatrix<T> m(n);

    constexpr std::size_t kUnobserved = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pos(n, kUnobserved);
    for (std::size_t p = 0; p < k; ++p) pos[pr.ordered()[p]] = p;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool oi = pos[i] != kUnobserved;
            const bool oj = pos[j] != kUnobserved;
            if (oi && oj) {
                m(i, j) = pos[i] < pos[j] ? T(1) : T(0);
            } else if (!oi && oj) {
                m(i, j) = mixed(n, k, pos[j]);
            } else if (oi && !oj) {
                m(i, j) = T(1) - mixed(n, k, pos[i]);
            }
        }
    }
    return m;
}

}  // namespace

PairwiseMatrix matrix_from_partial(const PartialRanking& pr) {
    return build_matrix<double>(pr, [](std::size_t n, std::size_t k, std::size_t r) {
        return p_unobserved_beats_observed(n, k, r);
    });
}

PairwiseMatrix matrix_from_partial(const PartialRanking& pr, const PTable& table) {
    return build_matrix<double>(pr, [&](std::size_t n, std::size_t k, std::size_t r) { return table.value(n, k, r); });
}

ExactPairwiseMatrix matrix_from_partial_exact(const PartialRanking& pr) {
    return build_matrix<Rational>(pr, [](std::size_t n, std::size_t k, std::size_t r) { return p_gap_identity(n, k, r); });
}

ExactPairwiseMatrix matrix_from_partial_oracle(const PartialRanking& pr) {
    const std::size_t n = pr.universe_size();
    if (n > kMatrixOracleLimit) {
        throw GuardError("matrix oracle refused for " + std::to_string(n) + " systems (limit " +
                         std::to_string(kMatrixOracleLimit) + ")");
    }
    std::vector<std::uint64_t> above(n * n, 0);
    std::uint64_t total = 0;
    std::vector<std::size_t> rank(n);
    for_each_compatible(pr, [&](const std::vector<SystemId>& ordering) {
        ++total;
        for (std::size_t p = 0; p < n; ++p) rank[ordering[p]] = p;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (rank[i] < rank[j]) ++above[i * n + j];
    });
    ExactPairwiseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) m(i, j) = Rational(above[i * n + j], total);
    return m;
}

// ---------------------------------------------------------------------------

AccumulatedMatrix::AccumulatedMatrix(std::size_t n)
    : n_(n),
      sums_(n * n, 0.0),
      wins_(n * n, 0),
      observed_(n, 0),
      row_num_(n * (n + 2), 0),
      scratch_pos_(n, 0) {}

void AccumulatedMatrix::add(const PartialRanking& pr) {
    if (pr.universe_size() != n_) {
        throw ValidationError("accumulate: partial ranking over " + std::to_string(pr.universe_size()) +
                              " systems added to a " + std::to_string(n_) + "-system accumulation");
    }
    add_chain(pr.ordered());
}

void AccumulatedMatrix::add_scores(std::span<const double> values, std::span<const std::uint8_t> presence) {
    if (values.size() != n_) throw ValidationError("accumulate: unit has the wrong number of systems");
    add_chain(partial_from_scores(values, presence).ordered());
}

void AccumulatedMatrix::add_chain(std::span<const SystemId> chain) {
    const std::size_t n = n_;
    const std::size_t k = chain.size();
    const std::size_t stride = n + 2;
    ++units_;

    // scratch_pos_[s] = 1 + position for observed systems, 0 otherwise.
    std::fill(scratch_pos_.begin(), scratch_pos_.end(), 0u);
    for (std::size_t p = 0; p < k; ++p) scratch_pos_[chain[p]] = static_cast<std::uint32_t>(p + 1);

    if (k == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            double* row = &sums_[i * n];
            for (std::size_t j = 0; j < n; ++j) row[j] += 0.5;
            row[i] -= 0.5;
            row_num_[i * stride + 2] += static_cast<std::int64_t>(n) - 1;
        }
        return;
    }

    const double inv = 1.0 / static_cast<double>(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = &sums_[i * n];
        const std::uint32_t pi = scratch_pos_[i];
        if (pi == 0) {
            // Unobserved i: (r_j + 1)/(k + 1) against observed j, 0.5 against unobserved.
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint32_t pj = scratch_pos_[j];
                row[j] += pj == 0 ? 0.5 : static_cast<double>(pj) * inv;
            }
            row[i] -= 0.5;
            row_num_[i * stride + 2] += static_cast<std::int64_t>(n) - 1;
        } else {
            ++observed_[i];
            std::uint64_t* wins = &wins_[i * n];
            const double lose_to_free = 1.0 - static_cast<double>(pi) * inv;
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint32_t pj = scratch_pos_[j];
                if (pj == 0) {
                    row[j] += lose_to_free;
                } else if (pi < pj) {
                    row[j] += 1.0;
                    ++wins[j];
                }
            }
            // (k-1-r) direct wins plus (N-k) * (k-r)/(k+1) imputed, over k+1.
            const auto kk = static_cast<std::int64_t>(k);
            const auto r = static_cast<std::int64_t>(pi - 1);
            row_num_[i * stride + k + 1] +=
                (kk - 1 - r) * (kk + 1) + (static_cast<std::int64_t>(n) - kk) * (kk - r);
        }
    }
}

void AccumulatedMatrix::merge(const AccumulatedMatrix& other) {
    if (other.n_ != n_) throw ValidationError("merge: accumulations over different universes");
    units_ += other.units_;
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += other.sums_[i];
    for (std::size_t i = 0; i < wins_.size(); ++i) wins_[i] += other.wins_[i];
    for (std::size_t i = 0; i < observed_.size(); ++i) observed_[i] += other.observed_[i];
    for (std::size_t i = 0; i < row_num_.size(); ++i) row_num_[i] += other.row_num_[i];
}

Rational AccumulatedMatrix::borda_score_exact(std::size_t i) const {
    if (i >= n_) throw ValidationError("borda_score_exact: system out of range");
    const std::size_t stride = n_ + 2;
    Rational b = 0;
    for (std::size_t d = 1; d < stride; ++d) {
        const auto num = row_num_[i * stride + d];
        if (num != 0) b += Rational(num, static_cast<std::int64_t>(d));
    }
    return b;
}

std::vector<double> AccumulatedMatrix::borda_scores() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<double>(borda_score_exact(i));
    return out;
}

AccumulatedMatrix accumulate(std::span<const PartialRanking> partials) {
    if (partials.empty()) throw ValidationError("accumulate: no partial rankings");
    AccumulatedMatrix acc(partials.front().universe_size());
    for (const auto& pr : partials) acc.add(pr);
    return acc;
}

}  // namespace partialrank
