#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "partialrank/combinatorics.hpp"
#include "partialrank/errors.hpp"

using namespace partialrank;

TEST_CASE("shuffle count examples and oracle") {
    CHECK(shuffle_count(0, 5) == 1);
    CHECK(shuffle_count(1, 1) == 2);
    CHECK(shuffle_count(2, 2) == 6);
    for (std::size_t a = 0; a <= 8; ++a)
        for (std::size_t b = 0; b <= 8; ++b) CHECK(shuffle_count(a, b) == oracle::count_interleavings(a, b));
    CHECK(shuffle_count(30, 30) == BigInt("118264581564861424"));
}

TEST_CASE("variation count examples and oracle") {
    CHECK(variation_count(0, 7) == 1);
    CHECK(variation_count(3, 3) == 6);
    CHECK(variation_count(2, 3) == 6);
    for (std::size_t b = 0; b <= 7; ++b)
        for (std::size_t a = 0; a <= b; ++a) CHECK(variation_count(a, b) == oracle::count_ordered_selections(a, b));
    CHECK_THROWS_AS(variation_count(4, 3), ValidationError);
}

TEST_CASE("total compatible examples") {
    CHECK(total_compatible(3, 2) == 3);
    CHECK(total_compatible(4, 2) == 12);
    for (std::size_t n = 0; n <= 12; ++n) CHECK(total_compatible(n, n) == 1);
    CHECK_THROWS_AS(total_compatible(2, 3), ValidationError);
    CHECK(factorial(20) == BigInt("2432902008176640000"));
    CHECK(factorial(25) == BigInt("15511210043330985984000000"));
}

TEST_CASE("p examples") {
    CHECK(p_shuffle_sum_exact(3, 2, 0) == Rational(1, 3));
    CHECK(p_shuffle_sum_exact(3, 2, 1) == Rational(2, 3));
    CHECK(p_gap_identity(3, 2, 0) == Rational(1, 3));
    CHECK(p_gap_identity(3, 2, 1) == Rational(2, 3));
    for (std::size_t n = 2; n <= 50; ++n)
        for (std::size_t r = 0; r + 1 < n; ++r)
            CHECK(p_shuffle_sum_exact(n, n - 1, r) == Rational(static_cast<long long>(r + 1), static_cast<long long>(n)));
    CHECK_THROWS_AS(p_gap_identity(3, 2, 2), ValidationError);
    CHECK_THROWS_AS(p_gap_identity(3, 3, 0), ValidationError);
    CHECK_THROWS_AS(p_unobserved_beats_observed(3, 0, 0), ValidationError);
}

TEST_CASE("three-way agreement up to n = 8") {
    for (std::size_t n = 2; n <= 8; ++n) {
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t r = 0; r < k; ++r) {
                const auto brute = oracle::p_by_enumeration(n, k, r);
                CHECK(p_shuffle_sum_exact(n, k, r) == brute);
                CHECK(p_gap_identity(n, k, r) == brute);
                CHECK(p_shuffle_sum_float(n, k, r) == doctest::Approx(static_cast<double>(brute)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("shuffle sum agrees with the identity for larger n") {
    for (std::size_t n : {20u, 40u, 64u}) {
        for (std::size_t k = 1; k < n; k += 3) {
            for (std::size_t r = 0; r < k; r += 2) {
                CHECK(p_shuffle_sum_exact(n, k, r) == p_gap_identity(n, k, r));
                CHECK(p_shuffle_sum_float(n, k, r) ==
                      doctest::Approx(p_unobserved_beats_observed(n, k, r)).epsilon(1e-9));
            }
        }
    }
    // Far beyond any exact threshold the log-space sum still holds.
    CHECK(p_shuffle_sum_float(300, 150, 40) == doctest::Approx(41.0 / 151.0).epsilon(1e-9));
}

TEST_CASE("p table layout") {
    const auto small = build_p_table(3);
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> keys;
    for (const auto& e : small.keys()) keys.emplace_back(e.n, e.k, e.r);
    const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> expected{
        {2, 1, 0}, {3, 1, 0}, {3, 2, 0}, {3, 2, 1}};
    CHECK(keys == expected);
    CHECK(small.size() == 4);
    CHECK_FALSE(small.contains(3, 3, 0));
    CHECK_FALSE(small.contains(4, 1, 0));
    CHECK_THROWS_AS(build_p_table(1), ValidationError);
    CHECK_THROWS_AS(small.value(4, 1, 0), ValidationError);
}

TEST_CASE("p table invariants") {
    for (auto source : {PSource::gap_identity, PSource::shuffle_sum}) {
        PTableOptions opts;
        opts.source = source;
        opts.exact_threshold = 12;
        const auto table = build_p_table(30, opts);
        for (const auto& e : table.keys()) {
            const double v = table.value(e.n, e.k, e.r);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
            CHECK(v == doctest::Approx(double(e.r + 1) / double(e.k + 1)).epsilon(1e-12));
            if (e.r > 0) CHECK(v > table.value(e.n, e.k, e.r - 1));
            const auto ex = table.exact(e.n, e.k, e.r);
            CHECK(ex.has_value() == (e.n <= 12));
            if (ex && e.n <= 8) CHECK(*ex == oracle::p_by_enumeration(e.n, e.k, e.r));
        }
    }
}

TEST_CASE("enumerate compatible") {
    const auto three = enumerate_compatible(PartialRanking(3, {0, 1}));
    REQUIRE(three.size() == 3);
    std::set<std::vector<SystemId>> got;
    for (const auto& r : three) got.insert(r.ordering());
    const std::set<std::vector<SystemId>> expected{{2, 0, 1}, {0, 2, 1}, {0, 1, 2}};
    CHECK(got == expected);

    CHECK(enumerate_compatible(PartialRanking(3, {})).size() == 6);
    const auto full = enumerate_compatible(PartialRanking(4, {3, 1, 0, 2}));
    REQUIRE(full.size() == 1);
    CHECK(full[0].ordering() == std::vector<SystemId>{3, 1, 0, 2});

    CHECK_THROWS_AS(enumerate_compatible(PartialRanking(11, {0})), GuardError);
}

TEST_CASE("enumeration matches next_permutation oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const auto pr = oracle::random_partial(1 + rng() % 7, rng);
        std::set<std::vector<SystemId>> mine;
        for (const auto& r : enumerate_compatible(pr)) mine.insert(r.ordering());
        const auto brute = oracle::compatible_permutations(pr);
        CHECK(mine.size() == brute.size());
        CHECK(mine == std::set<std::vector<SystemId>>(brute.begin(), brute.end()));
        CHECK(BigInt(brute.size()) == total_compatible(pr.universe_size(), pr.observed_count()));
    }
}

TEST_CASE("sampling is uniform over completions") {
    const PartialRanking pr(3, {0, 1});
    Engine rng(11);
    int before = 0;
    constexpr int kSamples = 30000;
    for (int s = 0; s < kSamples; ++s) {
        const auto r = sample_compatible(pr, rng);
        CHECK(r.rank_of(0) < r.rank_of(1));
        if (r.rank_of(2) < r.rank_of(0)) ++before;
    }
    CHECK(std::abs(double(before) / kSamples - 1.0 / 3.0) < 0.01);

    int first = 0;
    Engine rng2(12);
    for (int s = 0; s < kSamples; ++s)
        if (sample_compatible(PartialRanking(2, {}), rng2).at(0) == 0) ++first;
    CHECK(std::abs(double(first) / kSamples - 0.5) < 0.01);

    const PartialRanking full(4, {2, 3, 0, 1});
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        CHECK(sample_compatible(full, seed).ordering() == full.ordered());
    CHECK(sample_compatible(pr, 99).ordering() == sample_compatible(pr, 99).ordering());
}

TEST_CASE("sample frequencies cover every completion evenly") {
    const PartialRanking pr(5, {3, 1});
    std::map<std::vector<SystemId>, int> counts;
    Engine rng(5);
    constexpr int kSamples = 60000;
    for (int s = 0; s < kSamples; ++s) ++counts[sample_compatible(pr, rng).ordering()];
    CHECK(counts.size() == 60);
    for (const auto& [_, c] : counts) CHECK(std::abs(double(c) / kSamples - 1.0 / 60.0) < 0.004);
}

TEST_CASE("shuffle lists keeps both orders") {
    Engine rng(3);
    const std::vector<SystemId> a{0, 1, 2}, b{7, 8};
    std::map<std::vector<SystemId>, int> counts;
    for (int s = 0; s < 20000; ++s) {
        const auto m = shuffle_lists(a, b, rng);
        REQUIRE(m.size() == 5);
        std::vector<SystemId> fa, fb;
        for (auto x : m) (x < 7 ? fa : fb).push_back(x);
        CHECK(fa == a);
        CHECK(fb == b);
        ++counts[m];
    }
    CHECK(counts.size() == 10);
    for (const auto& [_, c] : counts) CHECK(std::abs(c / 20000.0 - 0.1) < 0.015);
}
