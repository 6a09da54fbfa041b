#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "tetra/estimate.hpp"

using namespace tetra;

namespace {

TimeSeries ts(std::vector<double> v) { return validate_series(std::move(v)); }

std::vector<double> steps(std::initializer_list<std::pair<std::size_t, double>> parts) {
    std::vector<double> x;
    for (auto [n, v] : parts)
        x.insert(x.end(), n, v);
    return x;
}

} // namespace

TEST_CASE("cusum_chart examples") {
    CHECK(cusum_chart(ts({1, 1, 1})) == std::vector<double>{0, 0, 0});
    CHECK(cusum_chart(ts({0, 0, 2, 2})) == std::vector<double>{-1, -2, -1, 0});

    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        x[i] = n01(rng);
        y[i] = x[i] + 7.25;
    }
    const auto a = cusum_chart(ts(x));
    const auto b = cusum_chart(ts(y));
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9).scale(1.0));
    CHECK(a.back() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("estimate_mhat on noiseless shapes") {
    CHECK(estimate_mhat(ts(std::vector<double>(40, 3.0)), 0.05) == 0);
    CHECK(estimate_mhat(ts(steps({{50, 0.0}, {50, 1.0}})), 0.05) == 1);
    CHECK(estimate_mhat(ts(steps({{33, 0.0}, {33, 1.0}, {33, 0.0}})), 0.05) == 2);
    CHECK(estimate_mhat(ts(steps({{30, 0.0}, {30, 2.0}, {30, 0.0}, {30, 2.0}})), 0.05) == 3);
    CHECK_THROWS_AS(estimate_mhat(ts({1, 2, 3}), 0.0), Error);
}

TEST_CASE("local extrema prominence") {
    // V shape: one minimum whose prominence is the shallower side's drop.
    const std::vector<double> v{0, -1, -2, -3, -2, -1};
    const auto e = local_extrema(v);
    REQUIRE(e.size() == 1);
    CHECK(e[0].offset == 3);
    CHECK_FALSE(e[0].is_max);
    CHECK(e[0].prominence == doctest::Approx(2.0));

    // Plateau maximum counted once.
    const auto p = local_extrema({0, 1, 1, 1, 0});
    REQUIRE(p.size() == 1);
    CHECK(p[0].is_max);
    CHECK(p[0].offset == 1);
}

TEST_CASE("estimate_mhat is offset and scale invariant") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x;
        const int k = 1 + static_cast<int>(rng() % 4);
        for (int j = 0; j < k; ++j) {
            const double mean = 3.0 * n01(rng);
            for (int i = 0; i < 30; ++i)
                x.push_back(mean + 0.3 * n01(rng));
        }
        const std::size_t base = estimate_mhat(ts(x), 0.05);
        for (auto [a, b] : {std::pair{1.0, 13.0}, {4.0, 0.0}, {0.25, -2.0}}) {
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                y[i] = a * x[i] + b;
            CHECK(estimate_mhat(ts(y), 0.05) == base);
        }
    }
}

TEST_CASE("laplace_log_pmf") {
    CHECK(laplace_log_pmf(4, 4, 2.0) == 0.0);
    CHECK(laplace_log_pmf(3, 5, 1.0) == -2.0);
    for (std::size_t k = 0; k <= 5; ++k)
        CHECK(laplace_log_pmf(5 + k, 5, 1.7) == laplace_log_pmf(5 - k, 5, 1.7));
}

TEST_CASE("build_candidate_set examples") {
    auto tiny = build_candidate_set(4, 1e-9, 0.9, 20, 1000, 10);
    CHECK(tiny.members == std::vector<std::size_t>{4});
    CHECK(tiny.log_prior[0] == doctest::Approx(0.0).scale(1.0));

    // Sum exp(-|m-5|) over 0..20: {4,5,6} holds ~80%, {3..7} ~93%.
    auto mid = build_candidate_set(5, 1.0, 0.9, 20, 1000, 10);
    CHECK(mid.members == std::vector<std::size_t>{3, 4, 5, 6, 7});
    double total = 0.0, kept3 = 0.0, kept5 = 0.0;
    for (int m = 0; m <= 20; ++m)
        total += std::exp(-std::abs(m - 5));
    for (int m = 4; m <= 6; ++m)
        kept3 += std::exp(-std::abs(m - 5));
    for (int m = 3; m <= 7; ++m)
        kept5 += std::exp(-std::abs(m - 5));
    CHECK(kept3 / total < 0.9);
    CHECK(kept5 / total >= 0.9);

    auto low = build_candidate_set(0, 2.0, 0.9, 20, 1000, 10);
    CHECK(low.members.front() == 0);
    for (std::size_t i = 1; i < low.members.size(); ++i)
        CHECK(low.members[i] == low.members[i - 1] + 1);

    CHECK_THROWS_AS(build_candidate_set(1, 2.0, 0.9, 5, 9, 10), Error);
    try {
        build_candidate_set(1, 2.0, 0.9, 5, 9, 10);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoFeasibleM);
    }
}

TEST_CASE("candidate set properties") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t T = 20 + rng() % 400;
        const std::size_t d = 2 + rng() % 20;
        if (T < d)
            continue;
        const std::size_t m_hat = rng() % 30;
        const double beta = 0.1 + static_cast<double>(rng() % 50) / 10.0;
        const double alpha = 0.05 + static_cast<double>(rng() % 90) / 100.0;
        const std::size_t m_max = rng() % 40;
        const auto set = build_candidate_set(m_hat, beta, alpha, m_max, T, d);
        REQUIRE_FALSE(set.members.empty());
        double mass = 0.0;
        for (double lp : set.log_prior)
            mass += std::exp(lp);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 0; i < set.members.size(); ++i) {
            CHECK(is_feasible(T, d, set.members[i]));
            CHECK(set.members[i] <= m_max);
            if (i > 0)
                CHECK(set.members[i] == set.members[i - 1] + 1);
        }
        const std::size_t cap = std::min(m_max, T / d - 1);
        if (m_hat <= cap)
            CHECK(set.contains(m_hat));
        // Prior falls off with distance from m_hat.
        for (std::size_t i = 0; i < set.members.size(); ++i)
            for (std::size_t j = 0; j < set.members.size(); ++j) {
                const auto di = static_cast<long>(set.members[i]) - static_cast<long>(m_hat);
                const auto dj = static_cast<long>(set.members[j]) - static_cast<long>(m_hat);
                if (std::abs(di) < std::abs(dj))
                    CHECK(set.log_prior[i] >= set.log_prior[j]);
            }
    }
}
