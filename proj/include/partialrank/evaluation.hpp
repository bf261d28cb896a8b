#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "partialrank/aggregation.hpp"
#include "partialrank/core.hpp"

namespace partialrank {

/// Kendall tau-a. Throws ValidationError when sizes differ or N < 2.
double kendall_tau(const Ranking& a, const Ranking& b);

/// True iff the first k systems of both rankings form the same set.
bool topk_same(const Ranking& a, const Ranking& b, std::size_t k);

struct ExperimentOptions {
    std::vector<Method> methods;
    std::vector<double> etas;
    std::size_t repeats = 100;
    std::uint64_t base_seed = 0;
    /// Break ties with a fresh seeded random priority per repeat instead of by id.
    /// Without it, fully-removed data collapses to the id order and the
    /// comparison measures label order instead of information.
    bool random_tie_break = true;
    /// Optional rescaling of one task applied before removal (corrupted side only).
    std::optional<std::size_t> scale_task;
    double lambda_scale = 1.0;
    std::size_t threads = 1;

    void validate(const Dataset& data) const;
};

struct RobustnessSample {
    std::size_t eta_index = 0;
    double eta = 0.0;
    std::size_t repeat = 0;
    Method method = Method::sigma_l;
    double tau = 0.0;
};

struct SummaryStat {
    double eta = 0.0;
    Method method = Method::sigma_l;
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation
    std::size_t count = 0;
};

struct RobustnessResult {
    std::vector<RobustnessSample> samples;  ///< ordered by (eta, repeat, method)
    std::vector<SummaryStat> summary;       ///< ordered by (eta, method)
};

/// For every eta and repeat: corrupt with a derived seed, aggregate, and compare
/// against the same method's ranking on the uncorrupted data.
RobustnessResult robustness_curve(const Dataset& data, const ExperimentOptions& options);

struct AgreementSample {
    std::size_t eta_index = 0;
    double eta = 0.0;
    std::size_t repeat = 0;
    Method method_a = Method::sigma_l;
    Method method_b = Method::sigma_l;
    double tau = 0.0;
    bool top1_same = false;
    bool top3_same = false;
};

struct AgreementSummary {
    double eta = 0.0;
    Method method_a = Method::sigma_l;
    Method method_b = Method::sigma_l;
    double mean_tau = 0.0;
    double top1_rate = 0.0;
    double top3_rate = 0.0;
    std::size_t count = 0;
};

struct AgreementResult {
    std::vector<AgreementSample> samples;
    std::vector<AgreementSummary> summary;
};

/// Pairwise agreement between methods on each corrupted dataset.
AgreementResult agreement_analysis(const Dataset& data, const ExperimentOptions& options);

/// Seed used to corrupt the data for (eta index, repeat).
std::uint64_t corruption_seed(std::uint64_t base_seed, std::size_t eta_index, std::size_t repeat);
/// Tie priority used for (eta index, repeat).
TieBreak repeat_tie_break(std::uint64_t base_seed, std::size_t eta_index, std::size_t repeat, std::size_t n);

}  // namespace partialrank
