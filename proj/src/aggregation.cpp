#include "partialrank/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "partialrank/errors.hpp"

namespace partialrank {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::sigma_l: return "sigma-l";
        case Method::sigma_2l: return "sigma-2l";
        case Method::mean: return "mean";
    }
    throw InvariantError("unknown method");
}

Method parse_method(std::string_view name) {
    if (name == "sigma-l") return Method::sigma_l;
    if (name == "sigma-2l") return Method::sigma_2l;
    if (name == "mean") return Method::mean;
    throw ValidationError("unknown method '" + std::string(name) + "' (expected sigma-l, sigma-2l or mean)");
}

namespace {

std::vector<SystemId> all_ids(std::size_t n) {
    std::vector<SystemId> ids(n);
    std::iota(ids.begin(), ids.end(), SystemId{0});
    return ids;
}

std::vector<SystemId> never_observed(const AccumulatedMatrix& acc) {
    std::vector<SystemId> out;
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (acc.observed_units(i) == 0) out.push_back(static_cast<SystemId>(i));
    return out;
}

}  // namespace

Ranking borda_from_matrix(const AccumulatedMatrix& acc, const TieBreak& tie) {
    if (acc.units() == 0) throw ValidationError("borda_from_matrix: empty accumulation");
    std::vector<Rational> b(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) b[i] = acc.borda_score_exact(i);
    auto ids = all_ids(acc.size());
    std::sort(ids.begin(), ids.end(), [&](SystemId x, SystemId y) {
        if (b[x] != b[y]) return b[x] > b[y];
        return tie.key(x) < tie.key(y);
    });
    return Ranking(std::move(ids));
}

std::vector<std::size_t> rank_sums(std::span<const Ranking> rankings) {
    if (rankings.empty()) throw ValidationError("borda_on_rankings: no rankings");
    const std::size_t n = rankings.front().size();
    std::vector<std::size_t> sums(n, 0);
    for (const auto& r : rankings) {
        if (r.size() != n) throw ValidationError("borda_on_rankings: rankings over different universes");
        for (std::size_t id = 0; id < n; ++id) sums[id] += r.rank_of(static_cast<SystemId>(id));
    }
    return sums;
}

Ranking borda_on_rankings(std::span<const Ranking> rankings, const TieBreak& tie) {
    const auto sums = rank_sums(rankings);
    auto ids = all_ids(sums.size());
    std::sort(ids.begin(), ids.end(), [&](SystemId x, SystemId y) {
        if (sums[x] != sums[y]) return sums[x] < sums[y];
        return tie.key(x) < tie.key(y);
    });
    return Ranking(std::move(ids));
}

AccumulatedMatrix accumulate_tasks(const ScoreTable& table) {
    AccumulatedMatrix acc(table.systems());
    std::vector<double> values(table.systems());
    std::vector<std::uint8_t> presence(table.systems());
    for (std::size_t t = 0; t < table.tasks(); ++t) {
        for (std::size_t n = 0; n < table.systems(); ++n) {
            const auto s = table.get(n, t);
            presence[n] = s.has_value();
            values[n] = s.value_or(0.0);
        }
        acc.add_scores(values, presence);
    }
    return acc;
}

AccumulatedMatrix accumulate_task_instances(const ScoreTensor& tensor, std::size_t task) {
    AccumulatedMatrix acc(tensor.systems());
    for (std::size_t k = 0; k < tensor.instances(task); ++k) {
        acc.add_scores(tensor.unit_values(task, k), tensor.unit_presence(task, k));
    }
    return acc;
}

AccumulatedMatrix accumulate_instances(const ScoreTensor& tensor) {
    AccumulatedMatrix acc(tensor.systems());
    for (std::size_t t = 0; t < tensor.tasks(); ++t) {
        for (std::size_t k = 0; k < tensor.instances(t); ++k) {
            acc.add_scores(tensor.unit_values(t, k), tensor.unit_presence(t, k));
        }
    }
    return acc;
}

namespace {

AggregationResult from_accumulation(const AccumulatedMatrix& acc, const TieBreak& tie) {
    AggregationResult out;
    out.ranking = borda_from_matrix(acc, tie);
    out.kind = ScoreKind::borda_wins;
    out.scores = acc.borda_scores();
    out.unobserved = never_observed(acc);
    return out;
}

AggregationResult rank_by_mean(const std::vector<double>& means, const TieBreak& tie) {
    AggregationResult out;
    out.kind = ScoreKind::mean;
    out.scores = means;
    auto ids = all_ids(means.size());
    for (auto id : ids)
        if (std::isnan(means[id])) out.unobserved.push_back(id);
    std::sort(ids.begin(), ids.end(), [&](SystemId x, SystemId y) {
        const bool nx = std::isnan(means[x]);
        const bool ny = std::isnan(means[y]);
        if (nx != ny) return ny;  // scored systems first
        if (!nx && means[x] != means[y]) return means[x] > means[y];
        return tie.key(x) < tie.key(y);
    });
    out.ranking = Ranking(std::move(ids));
    return out;
}

}  // namespace

AggregationResult sigma_l_task(const ScoreTable& table, const TieBreak& tie) {
    if (table.tasks() == 0) throw ValidationError("sigma-l: table has no tasks");
    return from_accumulation(accumulate_tasks(table), tie);
}

AggregationResult sigma_l_instance(const ScoreTensor& tensor, const TieBreak& tie) {
    if (tensor.units() == 0) throw ValidationError("sigma-l: tensor has no instances");
    return from_accumulation(accumulate_instances(tensor), tie);
}

AggregationResult sigma_2l(const ScoreTensor& tensor, const TieBreak& tie) {
    std::vector<Ranking> per_task;
    std::vector<std::uint8_t> seen(tensor.systems(), 0);
    for (std::size_t t = 0; t < tensor.tasks(); ++t) {
        if (tensor.instances(t) == 0) continue;
        const auto acc = accumulate_task_instances(tensor, t);
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (acc.observed_units(i) > 0) seen[i] = 1;
        per_task.push_back(borda_from_matrix(acc, tie));
    }
    if (per_task.empty()) throw ValidationError("sigma-2l: tensor has no instances");

    AggregationResult out;
    out.ranking = borda_on_rankings(per_task, tie);
    out.kind = ScoreKind::rank_sum;
    for (auto s : rank_sums(per_task)) out.scores.push_back(static_cast<double>(s));
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) out.unobserved.push_back(static_cast<SystemId>(i));
    return out;
}

AggregationResult sigma_mu_task(const ScoreTable& table, const TieBreak& tie) {
    std::vector<double> means(table.systems(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = 0; n < table.systems(); ++n) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < table.tasks(); ++t) {
            if (auto s = table.get(n, t)) {
                total += *s;
                ++count;
            }
        }
        if (count > 0) means[n] = total / static_cast<double>(count);
    }
    return rank_by_mean(means, tie);
}

AggregationResult sigma_mu_instance(const ScoreTensor& tensor, const TieBreak& tie) {
    const std::size_t n_sys = tensor.systems();
    std::vector<double> task_mean_total(n_sys, 0.0);
    std::vector<std::size_t> tasks_seen(n_sys, 0);
    std::vector<double> total(n_sys);
    std::vector<std::size_t> count(n_sys);
    for (std::size_t t = 0; t < tensor.tasks(); ++t) {
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t k = 0; k < tensor.instances(t); ++k) {
            const auto values = tensor.unit_values(t, k);
            const auto presence = tensor.unit_presence(t, k);
            for (std::size_t n = 0; n < n_sys; ++n) {
                if (presence[n]) {
                    total[n] += values[n];
                    ++count[n];
                }
            }
        }
        for (std::size_t n = 0; n < n_sys; ++n) {
            if (count[n] > 0) {
                task_mean_total[n] += total[n] / static_cast<double>(count[n]);
                ++tasks_seen[n];
            }
        }
    }
    std::vector<double> means(n_sys, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = 0; n < n_sys; ++n)
        if (tasks_seen[n] > 0) means[n] = task_mean_total[n] / static_cast<double>(tasks_seen[n]);
    return rank_by_mean(means, tie);
}

AggregationResult aggregate(Method method, const Dataset& data, const TieBreak& tie) {
    if (const auto* table = std::get_if<ScoreTable>(&data)) {
        switch (method) {
            case Method::sigma_l: return sigma_l_task(*table, tie);
            case Method::mean: return sigma_mu_task(*table, tie);
            case Method::sigma_2l:
                throw ValidationError("sigma-2l needs instance-level data; got a task-level table");
        }
    }
    const auto& tensor = std::get<ScoreTensor>(data);
    switch (method) {
        case Method::sigma_l: return sigma_l_instance(tensor, tie);
        case Method::sigma_2l: return sigma_2l(tensor, tie);
        case Method::mean: return sigma_mu_instance(tensor, tie);
    }
    throw InvariantError("unknown method");
}

}  // namespace partialrank
