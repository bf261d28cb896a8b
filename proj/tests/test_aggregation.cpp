#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "partialrank/aggregation.hpp"
#include "partialrank/errors.hpp"
#include "partialrank/pairwise.hpp"

using namespace partialrank;

namespace {

/// Borda from enumeration-backed unit matrices, exact, ties by id.
Ranking oracle_borda(const std::vector<PartialRanking>& units, std::size_t n) {
    std::vector<Rational> b(n, 0);
    for (const auto& pr : units) {
        const auto m = matrix_from_partial_oracle(pr);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) b[i] += m(i, j);
    }
    std::vector<SystemId> order(n);
    std::iota(order.begin(), order.end(), SystemId{0});
    std::stable_sort(order.begin(), order.end(), [&](SystemId x, SystemId y) { return b[x] > b[y]; });
    return Ranking(order);
}

std::vector<PartialRanking> task_units(const ScoreTable& t) {
    std::vector<PartialRanking> out;
    for (std::size_t task = 0; task < t.tasks(); ++task) {
        const auto col = t.column(task);
        out.push_back(partial_from_scores(col, t.systems()));
    }
    return out;
}

std::vector<PartialRanking> instance_units(const ScoreTensor& x) {
    std::vector<PartialRanking> out;
    for (std::size_t t = 0; t < x.tasks(); ++t)
        for (std::size_t k = 0; k < x.instances(t); ++k) out.push_back(partial_from_scores(x.unit_values(t, k), x.unit_presence(t, k)));
    return out;
}

ScoreTable table_from(const std::vector<std::vector<double>>& rows) {
    ScoreTable t(rows.size(), rows.front().size());
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t k = 0; k < rows[s].size(); ++k)
            if (!std::isnan(rows[s][k])) t.set(s, k, rows[s][k]);
    return t;
}

const double X = std::nan("");

}  // namespace

TEST_CASE("method names") {
    CHECK(parse_method("sigma-l") == Method::sigma_l);
    CHECK(parse_method("sigma-2l") == Method::sigma_2l);
    CHECK(parse_method("mean") == Method::mean);
    CHECK(method_name(Method::sigma_2l) == "sigma-2l");
    CHECK_THROWS_AS(parse_method("median"), ValidationError);
}

TEST_CASE("borda from matrix examples") {
    AccumulatedMatrix acc(3);
    acc.add(PartialRanking(3, {0, 1, 2}));
    CHECK(borda_from_matrix(acc).ordering() == std::vector<SystemId>{0, 1, 2});
    CHECK(acc.borda_score_exact(0) == 2);
    CHECK(acc.borda_score_exact(1) == 1);
    CHECK(acc.borda_score_exact(2) == 0);

    AccumulatedMatrix none(4);
    none.add(PartialRanking(4, {}));
    CHECK(borda_from_matrix(none).ordering() == std::vector<SystemId>{0, 1, 2, 3});
    CHECK(borda_from_matrix(none, TieBreak({3, 2, 1, 0})).ordering() == std::vector<SystemId>{3, 2, 1, 0});

    AccumulatedMatrix mixed(3);
    mixed.add(PartialRanking(3, {0, 1}));
    mixed.add(PartialRanking(3, {}));
    // Row sums 8/3, 4/3, 2.
    CHECK(borda_from_matrix(mixed).ordering() == std::vector<SystemId>{0, 2, 1});

    CHECK_THROWS_AS(borda_from_matrix(AccumulatedMatrix(3)), ValidationError);
}

TEST_CASE("exact ties are detected") {
    // 0 > 1 on one unit, 1 > 0 on another: exact tie despite float sums.
    AccumulatedMatrix acc(5);
    acc.add(PartialRanking(5, {0, 1, 2}));
    acc.add(PartialRanking(5, {1, 0, 2}));
    CHECK(acc.borda_score_exact(0) == acc.borda_score_exact(1));
    CHECK(borda_from_matrix(acc).ordering()[0] == 0);
    CHECK(borda_from_matrix(acc, TieBreak({1, 0, 2, 3, 4})).ordering()[0] == 1);
}

TEST_CASE("borda on rankings") {
    std::vector<Ranking> single{Ranking({2, 0, 1})};
    CHECK(borda_on_rankings(single) == single[0]);
    std::vector<Ranking> rev{Ranking({0, 1, 2}), Ranking({2, 1, 0})};
    CHECK(borda_on_rankings(rev).ordering() == std::vector<SystemId>{0, 1, 2});
    std::vector<Ranking> two{Ranking({0, 1, 2}), Ranking({0, 2, 1})};
    CHECK(rank_sums(two) == std::vector<std::size_t>{0, 3, 3});
    CHECK(borda_on_rankings(two).ordering() == std::vector<SystemId>{0, 1, 2});
    CHECK_THROWS_AS(borda_on_rankings(std::vector<Ranking>{}), ValidationError);
    std::vector<Ranking> bad{Ranking({0, 1}), Ranking({0, 1, 2})};
    CHECK_THROWS_AS(borda_on_rankings(bad), ValidationError);
}

TEST_CASE("sigma-l task level") {
    const auto one = table_from({{0.2}, {0.9}, {0.5}});
    CHECK(sigma_l_task(one).ranking.ordering() == std::vector<SystemId>{1, 2, 0});

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        const std::size_t tasks = 1 + rng() % 3;
        auto t = oracle::random_table(n, tasks, 0.3, rng);
        // One system never observed.
        if (trial % 4 == 0)
            for (std::size_t k = 0; k < tasks; ++k) t.clear(n - 1, k);
        const auto res = sigma_l_task(t);
        CHECK(res.ranking == oracle_borda(task_units(t), n));
        CHECK(res.kind == ScoreKind::borda_wins);
        if (trial % 4 == 0) CHECK(std::find(res.unobserved.begin(), res.unobserved.end(), n - 1) != res.unobserved.end());
    }
}

TEST_CASE("sigma-l complete table equals borda on per-task rankings") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 10;
        const auto t = oracle::random_table(n, 1 + rng() % 8, 0.0, rng);
        std::vector<Ranking> per_task;
        for (const auto& pr : task_units(t)) per_task.emplace_back(pr.ordered());
        CHECK(sigma_l_task(t).ranking == borda_on_rankings(per_task));
    }
}

TEST_CASE("sigma-l instance level") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        const auto x = oracle::random_tensor(n, 2, 2, 0.3, rng);
        CHECK(sigma_l_instance(x).ranking == oracle_borda(instance_units(x), n));
    }
    // K = 1 collapses to the table.
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = oracle::random_table(6, 4, 0.25, rng);
        CHECK(sigma_l_instance(ScoreTensor::from_table(t)).ranking == sigma_l_task(t).ranking);
    }
    // Identical instance rankings.
    ScoreTensor same(4, {3, 2});
    const std::vector<double> s{0.1, 0.7, 0.4, 0.9};
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t k = 0; k < same.instances(t); ++k)
            for (std::size_t n = 0; n < 4; ++n) same.set(n, t, k, s[n] + double(k));
    CHECK(sigma_l_instance(same).ranking.ordering() == std::vector<SystemId>{3, 1, 2, 0});
}

TEST_CASE("sigma-2l") {
    std::mt19937_64 rng(23);
    const auto single = oracle::random_tensor(5, 1, 4, 0.2, rng);
    CHECK(sigma_2l(single).ranking == sigma_l_instance(single).ranking);

    // Per-task rankings (0,1,2,3) and (1,0,2,3): rank sums tie between 0 and 1.
    ScoreTensor x(4, {1, 1});
    const std::vector<double> t0{4, 3, 2, 1}, t1{3, 4, 2, 1};
    for (std::size_t n = 0; n < 4; ++n) {
        x.set(n, 0, 0, t0[n]);
        x.set(n, 1, 0, t1[n]);
    }
    const auto res = sigma_2l(x);
    CHECK(res.ranking.ordering() == std::vector<SystemId>{0, 1, 2, 3});
    CHECK(res.kind == ScoreKind::rank_sum);
    CHECK(res.scores == std::vector<double>{1, 1, 4, 6});

    ScoreTensor twin(3, {2, 2});
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t n = 0; n < 3; ++n) twin.set(n, t, k, double(n) * 0.5 + double(k));
    CHECK(sigma_2l(twin).ranking.ordering() == std::vector<SystemId>{2, 1, 0});

    // Against a direct two-step oracle.
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        const auto y = oracle::random_tensor(n, 3, 2, 0.3, rng);
        std::vector<Ranking> per_task;
        for (std::size_t t = 0; t < 3; ++t) {
            std::vector<PartialRanking> units;
            for (std::size_t k = 0; k < 2; ++k) units.push_back(partial_from_scores(y.unit_values(t, k), y.unit_presence(t, k)));
            per_task.push_back(oracle_borda(units, n));
        }
        std::vector<std::size_t> sums(n, 0);
        for (const auto& r : per_task)
            for (SystemId s = 0; s < n; ++s) sums[s] += r.rank_of(s);
        std::vector<SystemId> order(n);
        std::iota(order.begin(), order.end(), SystemId{0});
        std::stable_sort(order.begin(), order.end(), [&](SystemId a, SystemId b) { return sums[a] < sums[b]; });
        CHECK(sigma_2l(y).ranking.ordering() == order);
    }
    CHECK_THROWS_AS(aggregate(Method::sigma_2l, Dataset(table_from({{1.0}, {2.0}}))), ValidationError);
}

TEST_CASE("mean baseline") {
    const auto t = table_from({{1.0, 3.0}, {2.5, X}, {X, X}, {0.0, 1.0}});
    const auto res = sigma_mu_task(t);
    CHECK(res.ranking.ordering() == std::vector<SystemId>{1, 0, 3, 2});
    CHECK(res.scores[0] == 2.0);
    CHECK(res.scores[1] == 2.5);
    CHECK(std::isnan(res.scores[2]));
    CHECK(res.unobserved == std::vector<SystemId>{2});
    CHECK(res.kind == ScoreKind::mean);

    const auto eq = table_from({{1.0, 2.0}, {2.0, 1.0}, {1.5, 1.5}});
    CHECK(sigma_mu_task(eq).ranking.ordering() == std::vector<SystemId>{0, 1, 2});

    std::mt19937_64 rng(41);
    const auto tab = oracle::random_table(6, 5, 0.2, rng);
    CHECK(sigma_mu_instance(ScoreTensor::from_table(tab)).ranking == sigma_mu_task(tab).ranking);

    ScoreTensor flat(3, {2, 3});
    for (std::size_t tk = 0; tk < 2; ++tk)
        for (std::size_t k = 0; k < flat.instances(tk); ++k)
            for (std::size_t n = 0; n < 3; ++n) flat.set(n, tk, k, 0.25);
    CHECK(sigma_mu_instance(flat).ranking.ordering() == std::vector<SystemId>{0, 1, 2});

    // Direct double-mean on a complete tensor with uneven K_t.
    ScoreTensor x(4, {2, 5, 3});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t tk = 0; tk < 3; ++tk)
        for (std::size_t k = 0; k < x.instances(tk); ++k)
            for (std::size_t n = 0; n < 4; ++n) x.set(n, tk, k, u(rng));
    const auto mu = sigma_mu_instance(x);
    for (std::size_t n = 0; n < 4; ++n) {
        double outer = 0;
        for (std::size_t tk = 0; tk < 3; ++tk) {
            double inner = 0;
            for (std::size_t k = 0; k < x.instances(tk); ++k) inner += *x.get(n, tk, k);
            outer += inner / double(x.instances(tk));
        }
        CHECK(mu.scores[n] == doctest::Approx(outer / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("scale counterexample flips the mean only") {
    const auto before = table_from({{1.0, 0.0}, {0.5, 2.0}});
    const auto after = table_from({{100.0, 0.0}, {50.0, 2.0}});
    CHECK(sigma_mu_task(before).ranking.ordering() == std::vector<SystemId>{1, 0});
    CHECK(sigma_mu_task(after).ranking.ordering() == std::vector<SystemId>{0, 1});
    CHECK(sigma_l_task(before).ranking == sigma_l_task(after).ranking);

    // (1.0, 0.0) vs (0.9, 10.0) scaled by 100 on task 0 lands on an exact
    // mean tie, so the order there comes from the tie-break alone.
    const auto tied = table_from({{100.0, 0.0}, {90.0, 10.0}});
    const auto mu = sigma_mu_task(tied);
    CHECK(mu.scores[0] == mu.scores[1]);
}

TEST_CASE("relabel equivariance of aggregation scores") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 8;
        const auto x = oracle::random_tensor(n, 3, 3, 0.3, rng);
        const auto rho = oracle::random_permutation(n, rng);
        const auto y = oracle::relabel(x, rho);
        for (auto m : {Method::sigma_l, Method::sigma_2l, Method::mean}) {
            const auto ra = aggregate(m, Dataset(x));
            const auto rb = aggregate(m, Dataset(y));
            for (SystemId s = 0; s < n; ++s) {
                if (std::isnan(ra.scores[s])) {
                    CHECK(std::isnan(rb.scores[rho[s]]));
                } else if (m != Method::sigma_2l) {
                    CHECK(ra.scores[s] == doctest::Approx(rb.scores[rho[s]]));
                }
            }
        }
        // Without ties the ranking itself is relabeled.
        const auto t = oracle::random_table(n, 4, 0.0, rng);
        const auto rt = oracle::relabel(t, rho);
        CHECK(oracle::relabel(sigma_mu_task(t).ranking, rho) == sigma_mu_task(rt).ranking);
    }
}
