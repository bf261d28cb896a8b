#pragma once

#include <cstdint>
#include <optional>

#include "partialrank/aggregation.hpp"
#include "partialrank/core.hpp"

namespace partialrank {

/// Scores s(n,t,k) ~ Gumbel(phi * n, beta), all independent.
struct GumbelConfig {
    std::size_t systems = 20;
    std::size_t tasks = 20;
    std::size_t instances = 20;
    double phi = 0.5;   ///< dispersion in [0, 1]; 0 makes systems indistinguishable
    double beta = 1.0;  ///< scale, > 0
    std::uint64_t seed = 0;

    /// Throws ValidationError on out-of-range fields.
    void validate() const;
};

ScoreTensor generate_gumbel(const GumbelConfig& cfg);

struct CorruptionConfig {
    double eta = 0.0;                       ///< removal proportion in [0, 1]
    double lambda_scale = 1.0;              ///< positive rescaling factor
    std::optional<std::size_t> target_task; ///< task to rescale, if any
    std::uint64_t seed = 0;

    void validate() const;
};

/// round(eta * cells), clamped to [0, cells]. Throws ValidationError if eta is outside [0, 1].
std::size_t removal_count(double eta, std::size_t cells);

/// Clears round(eta * N * T) distinct (system, task) cells drawn uniformly.
ScoreTable corrupt_missing_task(const ScoreTable& table, double eta, std::uint64_t seed);

/// Clears every instance of round(eta * N * T) distinct (system, task) pairs.
ScoreTensor corrupt_missing_instance(const ScoreTensor& tensor, double eta, std::uint64_t seed);

/// Multiplies the present scores of `task` by lambda. Throws ValidationError if lambda <= 0.
ScoreTable scale_task(const ScoreTable& table, std::size_t task, double lambda);
ScoreTensor scale_task(const ScoreTensor& tensor, std::size_t task, double lambda);

/// Rescaling (when a target task is set) followed by removal.
Dataset apply_corruption(const Dataset& data, const CorruptionConfig& cfg);

}  // namespace partialrank
