#include "partialrank/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "partialrank/errors.hpp"

namespace partialrank {

namespace {

void check_permutation(const std::vector<SystemId>& ids, const char* what) {
    std::vector<std::uint8_t> seen(ids.size(), 0);
    for (SystemId id : ids) {
        if (id >= ids.size()) {
            throw ValidationError(std::string(what) + ": id " + std::to_string(id) +
                                  " out of range for " + std::to_string(ids.size()) + " systems");
        }
        if (seen[id]++) {
            throw ValidationError(std::string(what) + ": duplicate id " + std::to_string(id));
        }
    }
}

}  // namespace

PartialRanking::PartialRanking(std::size_t universe_size, std::vector<SystemId> ordered)
    : universe_size_(universe_size), ordered_(std::move(ordered)) {
    if (ordered_.size() > universe_size_) {
        throw ValidationError("partial ranking longer than its universe");
    }
    std::vector<std::uint8_t> seen(universe_size_, 0);
    for (SystemId id : ordered_) {
        if (id >= universe_size_) {
            throw ValidationError("partial ranking: id " + std::to_string(id) + " out of range");
        }
        if (seen[id]++) {
            throw ValidationError("partial ranking: duplicate id " + std::to_string(id));
        }
    }
}

std::optional<std::size_t> PartialRanking::position_of(SystemId id) const {
    auto it = std::find(ordered_.begin(), ordered_.end(), id);
    if (it == ordered_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ordered_.begin());
}

Ranking::Ranking(std::vector<SystemId> ordering) : ordering_(std::move(ordering)) {
    check_permutation(ordering_, "ranking");
    rank_of_.resize(ordering_.size());
    for (std::size_t p = 0; p < ordering_.size(); ++p) rank_of_[ordering_[p]] = p;
}

Ranking Ranking::identity(std::size_t n) {
    std::vector<SystemId> ids(n);
    std::iota(ids.begin(), ids.end(), SystemId{0});
    return Ranking(std::move(ids));
}

Ranking ranking_from_ordering(std::vector<SystemId> ordering) { return Ranking(std::move(ordering)); }

TieBreak::TieBreak(std::vector<SystemId> priority) : priority_(std::move(priority)) {
    check_permutation(priority_, "tie-break priority");
}

// ---------------------------------------------------------------------------

ScoreTable::ScoreTable(std::size_t systems, std::size_t tasks)
    : systems_(systems), tasks_(tasks), values_(systems * tasks, 0.0), present_(systems * tasks, 0) {}

std::size_t ScoreTable::index(std::size_t system, std::size_t task) const {
    if (system >= systems_ || task >= tasks_) {
        throw ValidationError("score table index (" + std::to_string(system) + ", " +
                              std::to_string(task) + ") out of range");
    }
    return task * systems_ + system;
}

std::optional<double> ScoreTable::get(std::size_t system, std::size_t task) const {
    const auto i = index(system, task);
    if (!present_[i]) return std::nullopt;
    return values_[i];
}

bool ScoreTable::has(std::size_t system, std::size_t task) const { return present_[index(system, task)] != 0; }

void ScoreTable::set(std::size_t system, std::size_t task, double score) {
    if (std::isnan(score)) throw ValidationError("NaN score");
    const auto i = index(system, task);
    values_[i] = score;
    present_[i] = 1;
}

void ScoreTable::clear(std::size_t system, std::size_t task) {
    const auto i = index(system, task);
    values_[i] = 0.0;
    present_[i] = 0;
}

std::size_t ScoreTable::present_count(std::size_t task) const {
    const auto first = present_.begin() + static_cast<std::ptrdiff_t>(index(0, task));
    return static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(systems_), 1));
}

std::vector<std::optional<double>> ScoreTable::column(std::size_t task) const {
    std::vector<std::optional<double>> out(systems_);
    for (std::size_t n = 0; n < systems_; ++n) out[n] = get(n, task);
    return out;
}

// ---------------------------------------------------------------------------

ScoreTensor::ScoreTensor(std::size_t systems, std::vector<std::size_t> instances_per_task)
    : systems_(systems), instances_(std::move(instances_per_task)) {
    unit_offset_.reserve(instances_.size());
    for (auto k : instances_) {
        unit_offset_.push_back(units_);
        units_ += k;
    }
    values_.assign(units_ * systems_, 0.0);
    present_.assign(units_ * systems_, 0);
}

ScoreTensor ScoreTensor::from_table(const ScoreTable& table) {
    ScoreTensor out(table.systems(), std::vector<std::size_t>(table.tasks(), 1));
    for (std::size_t t = 0; t < table.tasks(); ++t) {
        for (std::size_t n = 0; n < table.systems(); ++n) {
            if (auto s = table.get(n, t)) out.set(n, t, 0, *s);
        }
    }
    return out;
}

std::size_t ScoreTensor::unit_index(std::size_t task, std::size_t instance) const {
    if (task >= instances_.size() || instance >= instances_[task]) {
        throw ValidationError("score tensor unit (" + std::to_string(task) + ", " +
                              std::to_string(instance) + ") out of range");
    }
    return unit_offset_[task] + instance;
}

std::size_t ScoreTensor::index(std::size_t system, std::size_t task, std::size_t instance) const {
    if (system >= systems_) throw ValidationError("system " + std::to_string(system) + " out of range");
    return unit_index(task, instance) * systems_ + system;
}

std::optional<double> ScoreTensor::get(std::size_t system, std::size_t task, std::size_t instance) const {
    const auto i = index(system, task, instance);
    if (!present_[i]) return std::nullopt;
    return values_[i];
}

bool ScoreTensor::has(std::size_t system, std::size_t task, std::size_t instance) const {
    return present_[index(system, task, instance)] != 0;
}

void ScoreTensor::set(std::size_t system, std::size_t task, std::size_t instance, double score) {
    if (std::isnan(score)) throw ValidationError("NaN score");
    const auto i = index(system, task, instance);
    values_[i] = score;
    present_[i] = 1;
}

void ScoreTensor::clear(std::size_t system, std::size_t task, std::size_t instance) {
    const auto i = index(system, task, instance);
    values_[i] = 0.0;
    present_[i] = 0;
}

std::span<const double> ScoreTensor::unit_values(std::size_t task, std::size_t instance) const {
    return std::span<const double>(values_).subspan(unit_index(task, instance) * systems_, systems_);
}

std::span<const std::uint8_t> ScoreTensor::unit_presence(std::size_t task, std::size_t instance) const {
    return std::span<const std::uint8_t>(present_).subspan(unit_index(task, instance) * systems_, systems_);
}

// ---------------------------------------------------------------------------

PartialRanking partial_from_scores(std::span<const double> values, std::span<const std::uint8_t> presence) {
    if (values.size() != presence.size()) throw ValidationError("values/presence length mismatch");
    std::vector<SystemId> ids;
    ids.reserve(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!presence[n]) continue;
        if (std::isnan(values[n])) throw ValidationError("NaN score for system " + std::to_string(n));
        ids.push_back(static_cast<SystemId>(n));
    }
    // ids are ascending, so a stable sort keeps ties in id order.
    std::stable_sort(ids.begin(), ids.end(), [&](SystemId a, SystemId b) { return values[a] > values[b]; });
    return PartialRanking(values.size(), std::move(ids));
}

PartialRanking partial_from_scores(std::span<const std::optional<double>> scores, std::size_t universe_size) {
    if (scores.size() != universe_size) {
        throw ValidationError("expected " + std::to_string(universe_size) + " scores, got " +
                              std::to_string(scores.size()));
    }
    std::vector<double> values(scores.size(), 0.0);
    std::vector<std::uint8_t> presence(scores.size(), 0);
    for (std::size_t n = 0; n < scores.size(); ++n) {
        if (scores[n]) {
            values[n] = *scores[n];
            presence[n] = 1;
        }
    }
    return partial_from_scores(std::span<const double>(values), std::span<const std::uint8_t>(presence));
}

}  // namespace partialrank
