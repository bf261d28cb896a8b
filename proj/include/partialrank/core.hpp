#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace partialrank {

/// Dense index of a system inside a universe of N systems.
using SystemId = std::uint32_t;

/// A strict chain over a subset of the systems, best first.
///
/// Systems missing from `ordered` are unobserved. An empty chain is legal and
/// carries no information.
class PartialRanking {
public:
    PartialRanking() = default;
    PartialRanking(std::size_t universe_size, std::vector<SystemId> ordered);

    std::size_t universe_size() const noexcept { return universe_size_; }
    const std::vector<SystemId>& ordered() const noexcept { return ordered_; }
    std::size_t observed_count() const noexcept { return ordered_.size(); }
    bool complete() const noexcept { return ordered_.size() == universe_size_; }

    /// Position of `id` in the chain (0 = best), or nullopt when unobserved.
    std::optional<std::size_t> position_of(SystemId id) const;

    bool operator==(const PartialRanking&) const = default;

private:
    std::size_t universe_size_ = 0;
    std::vector<SystemId> ordered_;
};

/// A total order of all N systems with its inverse view.
class Ranking {
public:
    Ranking() = default;

    /// Throws ValidationError unless `ordering` is a permutation of [0, N).
    explicit Ranking(std::vector<SystemId> ordering);

    static Ranking identity(std::size_t n);

    std::size_t size() const noexcept { return ordering_.size(); }
    const std::vector<SystemId>& ordering() const noexcept { return ordering_; }
    const std::vector<std::size_t>& ranks() const noexcept { return rank_of_; }
    std::size_t rank_of(SystemId id) const { return rank_of_.at(id); }
    SystemId at(std::size_t position) const { return ordering_.at(position); }

    bool operator==(const Ranking& other) const { return ordering_ == other.ordering_; }

private:
    std::vector<SystemId> ordering_;
    std::vector<std::size_t> rank_of_;
};

Ranking ranking_from_ordering(std::vector<SystemId> ordering);

/// Secondary sort key used whenever two systems tie.
///
/// The default orders ties by ascending id. A custom priority is a permutation
/// `priority` where a smaller `priority[id]` wins the tie.
class TieBreak {
public:
    TieBreak() = default;
    explicit TieBreak(std::vector<SystemId> priority);

    std::size_t key(SystemId id) const { return priority_.empty() ? id : priority_[id]; }
    bool by_id() const noexcept { return priority_.empty(); }

private:
    std::vector<SystemId> priority_;
};

/// Task-level scores s(n, t) with explicit absence. Higher is better.
class ScoreTable {
public:
    ScoreTable() = default;
    ScoreTable(std::size_t systems, std::size_t tasks);

    std::size_t systems() const noexcept { return systems_; }
    std::size_t tasks() const noexcept { return tasks_; }

    std::optional<double> get(std::size_t system, std::size_t task) const;
    bool has(std::size_t system, std::size_t task) const;
    /// Throws ValidationError on NaN.
    void set(std::size_t system, std::size_t task, double score);
    void clear(std::size_t system, std::size_t task);

    /// Number of present systems on `task` (N_t).
    std::size_t present_count(std::size_t task) const;
    std::vector<std::optional<double>> column(std::size_t task) const;

    bool operator==(const ScoreTable&) const = default;

private:
    std::size_t index(std::size_t system, std::size_t task) const;

    std::size_t systems_ = 0;
    std::size_t tasks_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> present_;
};

/// Instance-level scores s(n, t, k) with K_t instances on task t.
///
/// Storage is unit-major: the N scores of one (task, instance) unit are
/// contiguous, which is the access pattern of every aggregation.
class ScoreTensor {
public:
    ScoreTensor() = default;
    ScoreTensor(std::size_t systems, std::vector<std::size_t> instances_per_task);

    /// One instance per task, copying the table's cells.
    static ScoreTensor from_table(const ScoreTable& table);

    std::size_t systems() const noexcept { return systems_; }
    std::size_t tasks() const noexcept { return instances_.size(); }
    std::size_t instances(std::size_t task) const { return instances_.at(task); }
    const std::vector<std::size_t>& instance_counts() const noexcept { return instances_; }
    std::size_t units() const noexcept { return units_; }

    std::optional<double> get(std::size_t system, std::size_t task, std::size_t instance) const;
    bool has(std::size_t system, std::size_t task, std::size_t instance) const;
    void set(std::size_t system, std::size_t task, std::size_t instance, double score);
    void clear(std::size_t system, std::size_t task, std::size_t instance);

    /// Raw scores and presence flags of one (task, instance) unit, indexed by system.
    std::span<const double> unit_values(std::size_t task, std::size_t instance) const;
    std::span<const std::uint8_t> unit_presence(std::size_t task, std::size_t instance) const;

    bool operator==(const ScoreTensor&) const = default;

private:
    std::size_t unit_index(std::size_t task, std::size_t instance) const;
    std::size_t index(std::size_t system, std::size_t task, std::size_t instance) const;

    std::size_t systems_ = 0;
    std::vector<std::size_t> instances_;
    std::vector<std::size_t> unit_offset_;
    std::size_t units_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> present_;
};

/// Chain of the present systems sorted by descending score, ties by ascending id.
/// Throws ValidationError on NaN or when the list length differs from N.
PartialRanking partial_from_scores(std::span<const std::optional<double>> scores,
                                   std::size_t universe_size);

/// Same as above over a raw (values, presence) pair; absent values are ignored.
PartialRanking partial_from_scores(std::span<const double> values,
                                   std::span<const std::uint8_t> presence);

}  // namespace partialrank
