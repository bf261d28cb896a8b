#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "partialrank/core.hpp"
#include "partialrank/pairwise.hpp"

namespace partialrank {

using Dataset = std::variant<ScoreTable, ScoreTensor>;

enum class Method {
    sigma_l,   ///< one-level: sum every unit matrix, one Borda pass
    sigma_2l,  ///< two-level: per-task Borda, then Borda over task rankings
    mean,      ///< mean of the available scores, missing cells ignored
};

std::string_view method_name(Method m);
/// Accepts "sigma-l", "sigma-2l", "mean". Throws ValidationError otherwise.
Method parse_method(std::string_view name);

enum class ScoreKind {
    borda_wins,  ///< higher is better
    rank_sum,    ///< lower is better
    mean,        ///< higher is better; NaN for systems with no scores
};

struct AggregationResult {
    Ranking ranking;
    ScoreKind kind = ScoreKind::borda_wins;
    std::vector<double> scores;          ///< indexed by system id
    std::vector<SystemId> unobserved;    ///< systems with no score anywhere
};

/// Borda on a pairwise accumulation: row sums, descending, ties by `tie`.
/// Throws ValidationError when no unit has been accumulated.
Ranking borda_from_matrix(const AccumulatedMatrix& acc, const TieBreak& tie = {});

/// Borda on complete rankings: sum of rank positions, ascending, ties by `tie`.
/// Throws ValidationError on an empty list or mismatched sizes.
Ranking borda_on_rankings(std::span<const Ranking> rankings, const TieBreak& tie = {});
std::vector<std::size_t> rank_sums(std::span<const Ranking> rankings);

/// One unit per task.
AccumulatedMatrix accumulate_tasks(const ScoreTable& table);
/// One unit per (task, instance).
AccumulatedMatrix accumulate_instances(const ScoreTensor& tensor);
/// The instances of a single task.
AccumulatedMatrix accumulate_task_instances(const ScoreTensor& tensor, std::size_t task);

AggregationResult sigma_l_task(const ScoreTable& table, const TieBreak& tie = {});
AggregationResult sigma_l_instance(const ScoreTensor& tensor, const TieBreak& tie = {});
AggregationResult sigma_2l(const ScoreTensor& tensor, const TieBreak& tie = {});
AggregationResult sigma_mu_task(const ScoreTable& table, const TieBreak& tie = {});
AggregationResult sigma_mu_instance(const ScoreTensor& tensor, const TieBreak& tie = {});

/// Dispatch on method and data granularity. sigma-2l on a task-level table is a
/// ValidationError.
AggregationResult aggregate(Method method, const Dataset& data, const TieBreak& tie = {});

}  // namespace partialrank
