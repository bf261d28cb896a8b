#include "partialrank/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "partialrank/errors.hpp"
#include "partialrank/random.hpp"

namespace partialrank {

void GumbelConfig::validate() const {
    if (systems < 1 || tasks < 1 || instances < 1) throw ValidationError("gumbel: N, T and K must be at least 1");
    if (!(phi >= 0.0 && phi <= 1.0)) throw ValidationError("gumbel: phi must lie in [0, 1]");
    if (!(beta > 0.0)) throw ValidationError("gumbel: beta must be positive");
}

ScoreTensor generate_gumbel(const GumbelConfig& cfg) {
    cfg.validate();
    ScoreTensor out(cfg.systems, std::vector<std::size_t>(cfg.tasks, cfg.instances));
    Engine rng(cfg.seed);
    for (std::size_t t = 0; t < cfg.tasks; ++t) {
        for (std::size_t k = 0; k < cfg.instances; ++k) {
            for (std::size_t n = 0; n < cfg.systems; ++n) {
                const double u = uniform_open01(rng);
                out.set(n, t, k, cfg.phi * static_cast<double>(n) - cfg.beta * std::log(-std::log(u)));
            }
        }
    }
    return out;
}

void CorruptionConfig::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
    if (!(lambda_scale > 0.0)) throw ValidationError("lambda must be positive");
}

std::size_t removal_count(double eta, std::size_t cells) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
    const auto count = std::llround(eta * static_cast<double>(cells));
    return std::min<std::size_t>(static_cast<std::size_t>(std::max<long long>(count, 0)), cells);
}

namespace {

/// `count` distinct indices of [0, cells), uniformly, via a partial Fisher-Yates.
std::vector<std::size_t> pick_cells(std::size_t cells, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(cells);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Engine rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(rng, cells - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    return idx;
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("scale: lambda must be positive, got " + std::to_string(lambda));
}

}  // namespace

ScoreTable corrupt_missing_task(const ScoreTable& table, double eta, std::uint64_t seed) {
    const std::size_t n = table.systems();
    const std::size_t cells = n * table.tasks();
    ScoreTable out = table;
    for (auto c : pick_cells(cells, removal_count(eta, cells), seed)) out.clear(c % n, c / n);
    return out;
}

ScoreTensor corrupt_missing_instance(const ScoreTensor& tensor, double eta, std::uint64_t seed) {
    const std::size_t n = tensor.systems();
    const std::size_t cells = n * tensor.tasks();
    ScoreTensor out = tensor;
    for (auto c : pick_cells(cells, removal_count(eta, cells), seed)) {
        const std::size_t system = c % n;
        const std::size_t task = c / n;
        for (std::size_t k = 0; k < out.instances(task); ++k) out.clear(system, task, k);
    }
    return out;
}

ScoreTable scale_task(const ScoreTable& table, std::size_t task, double lambda) {
    check_lambda(lambda);
    if (task >= table.tasks()) throw ValidationError("scale: task index out of range");
    ScoreTable out = table;
    for (std::size_t n = 0; n < out.systems(); ++n)
        if (auto s = out.get(n, task)) out.set(n, task, *s * lambda);
    return out;
}

ScoreTensor scale_task(const ScoreTensor& tensor, std::size_t task, double lambda) {
    check_lambda(lambda);
    if (task >= tensor.tasks()) throw ValidationError("scale: task index out of range");
    ScoreTensor out = tensor;
    for (std::size_t k = 0; k < out.instances(task); ++k)
        for (std::size_t n = 0; n < out.systems(); ++n)
            if (auto s = out.get(n, task, k)) out.set(n, task, k, *s * lambda);
    return out;
}

Dataset apply_corruption(const Dataset& data, const CorruptionConfig& cfg) {
    cfg.validate();
    return std::visit(
        [&](const auto& d) -> Dataset {
            auto scaled = cfg.target_task ? scale_task(d, *cfg.target_task, cfg.lambda_scale) : d;
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ScoreTable>) {
                return corrupt_missing_task(scaled, cfg.eta, cfg.seed);
            } else {
                return corrupt_missing_instance(scaled, cfg.eta, cfg.seed);
            }
        },
        data);
}

}  // namespace partialrank
