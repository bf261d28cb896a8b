#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "partialrank/aggregation.hpp"
#include "partialrank/confidence.hpp"
#include "partialrank/evaluation.hpp"

namespace partialrank {

enum class Level { task, instance };

std::string_view level_name(Level level);
/// Accepts "task" or "instance". Throws ValidationError otherwise.
Level parse_level(std::string_view name);

/// Scores plus the names their dense ids were interned from.
struct LabeledData {
    Dataset data;
    std::vector<std::string> systems;
    std::vector<std::string> tasks;
    std::vector<std::vector<std::string>> instances;  ///< per task; empty for task-level data

    Level level() const { return std::holds_alternative<ScoreTable>(data) ? Level::task : Level::instance; }
    const ScoreTable& table() const { return std::get<ScoreTable>(data); }
    const ScoreTensor& tensor() const { return std::get<ScoreTensor>(data); }

    bool operator==(const LabeledData&) const = default;
};

/// Long CSV: header `system,task,score` or `system,task,instance,score`.
/// Names are interned in first-appearance order. A row with an empty score
/// declares its names without adding a value. Throws ParseError with the line number.
LabeledData parse_long_csv(std::istream& in, Level level);
LabeledData parse_long_csv(const std::filesystem::path& path, Level level);

/// Wide matrix: first column system names, one column per task, `X` or an
/// empty cell for a missing score.
LabeledData parse_wide_matrix(std::istream& in);
LabeledData parse_wide_matrix(const std::filesystem::path& path);

/// Writes the long CSV form. Rows are ordered so that parsing the output interns
/// every name at the id it already has; empty-score rows are added only where a
/// name could not otherwise appear in order.
void write_long_csv(std::ostream& out, const LabeledData& data);

/// Names for synthetic data: systems "s<n>", tasks "t<t>", instances "<k>".
LabeledData label_synthetic(Dataset data);

/// Negates every score of the named tasks. Throws ValidationError for unknown names.
void negate_tasks(LabeledData& data, const std::vector<std::string>& task_names);

/// Task index by name; a plain integer is accepted as an index.
std::size_t find_task(const LabeledData& data, std::string_view name_or_index);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

// Output schemas.
std::string ranking_json(const AggregationResult& result, Method method, const LabeledData& data);
void write_ranking_csv(std::ostream& out, const AggregationResult& result, const LabeledData& data);

void write_confidence_csv(std::ostream& out, const ConfidenceReport& report, const Ranking& order,
                          const LabeledData& data);
void write_heatmap_csv(std::ostream& out, const std::vector<std::vector<double>>& heatmap, const Ranking& order,
                       const LabeledData& data);
std::string confidence_json(const ConfidenceReport& report, const Ranking& order, const LabeledData& data,
                            HoeffdingConstant constant);

void write_robustness_csv(std::ostream& out, const RobustnessResult& result);
std::string robustness_json(const RobustnessResult& result);
void write_agreement_csv(std::ostream& out, const AgreementResult& result);
std::string agreement_json(const AgreementResult& result);

}  // namespace partialrank
