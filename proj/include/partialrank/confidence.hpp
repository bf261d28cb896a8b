#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "partialrank/core.hpp"
#include "partialrank/pairwise.hpp"

namespace partialrank {

enum class Verdict { i_wins, j_wins, undecided };

std::string_view verdict_name(Verdict v);

enum class HoeffdingConstant {
    log_inv_delta,      ///< c = sqrt(-ln(delta) / (2z))
    two_sided,          ///< c = sqrt(ln(2/delta) / (2z))
};

/// Half-width of the Hoeffding interval after z direct comparisons. delta is the
/// failure probability, so smaller delta widens the interval.
/// Throws ValidationError for z == 0 or delta outside (0, 1].
double hoeffding_halfwidth(std::uint64_t z, double delta,
                           HoeffdingConstant constant = HoeffdingConstant::log_inv_delta);

struct PairConfidence {
    SystemId i = 0;
    SystemId j = 0;
    std::uint64_t z = 0;
    std::optional<double> m_hat;  ///< direct win rate of i over j; empty when z == 0
    std::optional<double> c;
    Verdict verdict = Verdict::undecided;

    /// Signed distance of the interval's near edge from 0.5, from i's side:
    /// positive when i wins, negative when j wins, 0 when undecided.
    double margin() const;
};

class ConfidenceReport {
public:
    ConfidenceReport(std::size_t n, double delta, std::vector<PairConfidence> pairs);

    std::size_t size() const noexcept { return n_; }
    double delta() const noexcept { return delta_; }
    /// Unordered pairs i < j, row-major.
    const std::vector<PairConfidence>& pairs() const noexcept { return pairs_; }
    /// Entry for (a, b) in either order, oriented so that `.i == a`.
    PairConfidence pair(SystemId a, SystemId b) const;
    std::size_t decided_count() const;

private:
    std::size_t n_;
    double delta_;
    std::vector<PairConfidence> pairs_;
};

ConfidenceReport confidence_report(const AccumulatedMatrix& acc, double delta,
                                   HoeffdingConstant constant = HoeffdingConstant::log_inv_delta);

/// N x N signed margins with rows and columns permuted into `order` (best first).
/// Antisymmetric; the diagonal is 0.
std::vector<std::vector<double>> significance_heatmap(const ConfidenceReport& report, const Ranking& order);

}  // namespace partialrank
