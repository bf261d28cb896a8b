#include "partialrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "partialrank/errors.hpp"
#include "partialrank/random.hpp"
#include "partialrank/synthetic.hpp"

namespace partialrank {

namespace {

// Counts inversions of `seq` by merge sort; `buf` is scratch of equal size.
std::uint64_t count_inversions(std::vector<std::size_t>& seq, std::vector<std::size_t>& buf, std::size_t lo,
                               std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(seq, buf, lo, mid) + count_inversions(seq, buf, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (seq[b] < seq[a]) {
            inv += mid - a;
            buf[out++] = seq[b++];
        } else {
            buf[out++] = seq[a++];
        }
    }
    while (a < mid) buf[out++] = seq[a++];
    while (b < hi) buf[out++] = seq[b++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              seq.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

std::size_t data_systems(const Dataset& data) {
    return std::visit([](const auto& d) { return d.systems(); }, data);
}

std::size_t data_tasks(const Dataset& data) {
    return std::visit([](const auto& d) { return d.tasks(); }, data);
}

/// Runs job(i) for i in [0, count) on up to `threads` workers.
void run_jobs(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) job(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace

double kendall_tau(const Ranking& a, const Ranking& b) {
    if (a.size() != b.size()) throw ValidationError("kendall_tau: rankings of different sizes");
    const std::size_t n = a.size();
    if (n < 2) throw ValidationError("kendall_tau: needs at least two systems");
    std::vector<std::size_t> seq(n), buf(n);
    for (std::size_t p = 0; p < n; ++p) seq[p] = b.rank_of(a.at(p));
    const double discordant = static_cast<double>(count_inversions(seq, buf, 0, n));
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return (pairs - 2.0 * discordant) / pairs;
}

bool topk_same(const Ranking& a, const Ranking& b, std::size_t k) {
    if (a.size() != b.size()) throw ValidationError("topk_same: rankings of different sizes");
    if (k < 1 || k > a.size()) throw ValidationError("topk_same: k must lie in [1, N]");
    for (std::size_t p = 0; p < k; ++p)
        if (b.rank_of(a.at(p)) >= k) return false;
    return true;
}

std::uint64_t corruption_seed(std::uint64_t base_seed, std::size_t eta_index, std::size_t repeat) {
    return derive_seed(base_seed, {0, eta_index, repeat});
}

TieBreak repeat_tie_break(std::uint64_t base_seed, std::size_t eta_index, std::size_t repeat, std::size_t n) {
    std::vector<SystemId> priority(n);
    std::iota(priority.begin(), priority.end(), SystemId{0});
    Engine rng(derive_seed(base_seed, {1, eta_index, repeat}));
    shuffle_in_place(std::span<SystemId>(priority), rng);
    return TieBreak(std::move(priority));
}

void ExperimentOptions::validate(const Dataset& data) const {
    if (methods.empty()) throw ValidationError("experiment: no methods given");
    if (etas.empty()) throw ValidationError("experiment: no eta values given");
    if (repeats == 0) throw ValidationError("experiment: repeats must be positive");
    for (double eta : etas)
        if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("experiment: eta must lie in [0, 1]");
    if (std::holds_alternative<ScoreTable>(data)) {
        for (auto m : methods)
            if (m == Method::sigma_2l) throw ValidationError("sigma-2l needs instance-level data; got a task-level table");
    }
    if (data_systems(data) < 2) throw ValidationError("experiment: needs at least two systems");
    if (scale_task) {
        if (*scale_task >= data_tasks(data)) throw ValidationError("experiment: scale task out of range");
        if (!(lambda_scale > 0.0)) throw ValidationError("experiment: lambda must be positive");
    }
}

namespace {

struct Job {
    std::size_t eta_index;
    std::size_t repeat;
};

std::vector<Job> make_jobs(const ExperimentOptions& options) {
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < options.etas.size(); ++e)
        for (std::size_t r = 0; r < options.repeats; ++r) jobs.push_back({e, r});
    return jobs;
}

Dataset corrupted_copy(const Dataset& data, const ExperimentOptions& options, const Job& job) {
    CorruptionConfig cfg;
    cfg.eta = options.etas[job.eta_index];
    cfg.seed = corruption_seed(options.base_seed, job.eta_index, job.repeat);
    cfg.target_task = options.scale_task;
    cfg.lambda_scale = options.lambda_scale;
    return apply_corruption(data, cfg);
}

TieBreak job_tie(const Dataset& data, const ExperimentOptions& options, const Job& job) {
    if (!options.random_tie_break) return {};
    return repeat_tie_break(options.base_seed, job.eta_index, job.repeat, data_systems(data));
}

}  // namespace

RobustnessResult robustness_curve(const Dataset& data, const ExperimentOptions& options) {
    options.validate(data);
    const auto jobs = make_jobs(options);
    const std::size_t n_methods = options.methods.size();

    std::vector<Ranking> fixed_reference;
    if (!options.random_tie_break) {
        for (auto m : options.methods) fixed_reference.push_back(aggregate(m, data).ranking);
    }

    RobustnessResult result;
    result.samples.resize(jobs.size() * n_methods);
    run_jobs(jobs.size(), options.threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        const TieBreak tie = job_tie(data, options, job);
        const Dataset corrupted = corrupted_copy(data, options, job);
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const Method m = options.methods[mi];
            const Ranking reference = options.random_tie_break ? aggregate(m, data, tie).ranking : fixed_reference[mi];
            const Ranking observed = aggregate(m, corrupted, tie).ranking;
            result.samples[j * n_methods + mi] =
                RobustnessSample{job.eta_index, options.etas[job.eta_index], job.repeat, m, kendall_tau(reference, observed)};
        }
    });

    for (std::size_t e = 0; e < options.etas.size(); ++e) {
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SummaryStat s{options.etas[e], options.methods[mi], 0.0, 0.0, options.repeats};
            auto tau_at = [&](std::size_t r) { return result.samples[(e * options.repeats + r) * n_methods + mi].tau; };
            for (std::size_t r = 0; r < options.repeats; ++r) s.mean += tau_at(r);
            s.mean /= static_cast<double>(s.count);
            double ss = 0.0;
            for (std::size_t r = 0; r < options.repeats; ++r) ss += (tau_at(r) - s.mean) * (tau_at(r) - s.mean);
            s.stddev = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;
            result.summary.push_back(s);
        }
    }
    return result;
}

AgreementResult agreement_analysis(const Dataset& data, const ExperimentOptions& options) {
    options.validate(data);
    if (options.methods.size() < 2) throw ValidationError("agreement: needs at least two methods");
    const auto jobs = make_jobs(options);
    const std::size_t n_methods = options.methods.size();
    const std::size_t n_pairs = n_methods * (n_methods - 1) / 2;
    const std::size_t top3 = std::min<std::size_t>(3, data_systems(data));

    AgreementResult result;
    result.samples.resize(jobs.size() * n_pairs);
    run_jobs(jobs.size(), options.threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        const TieBreak tie = job_tie(data, options, job);
        const Dataset corrupted = corrupted_copy(data, options, job);
        std::vector<Ranking> rankings;
        for (auto m : options.methods) rankings.push_back(aggregate(m, corrupted, tie).ranking);
        std::size_t slot = j * n_pairs;
        for (std::size_t a = 0; a < n_methods; ++a) {
            for (std::size_t b = a + 1; b < n_methods; ++b) {
                result.samples[slot++] = AgreementSample{job.eta_index,
                                                          options.etas[job.eta_index],
                                                          job.repeat,
                                                          options.methods[a],
                                                          options.methods[b],
                                                          kendall_tau(rankings[a], rankings[b]),
                                                          topk_same(rankings[a], rankings[b], 1),
                                                          topk_same(rankings[a], rankings[b], top3)};
            }
        }
    });

    for (std::size_t e = 0; e < options.etas.size(); ++e) {
        std::size_t pair = 0;
        for (std::size_t a = 0; a < n_methods; ++a) {
            for (std::size_t b = a + 1; b < n_methods; ++b, ++pair) {
                AgreementSummary s{options.etas[e], options.methods[a], options.methods[b], 0.0, 0.0, 0.0, options.repeats};
                for (std::size_t r = 0; r < options.repeats; ++r) {
                    const auto& x = result.samples[(e * options.repeats + r) * n_pairs + pair];
                    s.mean_tau += x.tau;
                    s.top1_rate += x.top1_same ? 1.0 : 0.0;
                    s.top3_rate += x.top3_same ? 1.0 : 0.0;
                }
                const double c = static_cast<double>(s.count);
                s.mean_tau /= c;
                s.top1_rate /= c;
                s.top3_rate /= c;
                result.summary.push_back(s);
            }
        }
    }
    return result;
}

}  // namespace partialrank
