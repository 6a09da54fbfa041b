#include <cmath>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "tetra/synth.hpp"

using namespace tetra;

TEST_CASE("generate_series noiseless concatenation") {
    SynthSpec spec;
    spec.segments = {{10, 0.0, 0.0}, {10, 5.0, 0.0}};
    const auto g = generate_series(spec);
    REQUIRE(g.series.size() == 20);
    for (std::size_t t = 1; t <= 20; ++t)
        CHECK(g.series[t - 1] == (t <= 10 ? 0.0 : 5.0));
    CHECK(g.truth.tau() == std::vector<std::size_t>{11});
}

TEST_CASE("generate_series is seeded") {
    SynthSpec spec;
    spec.segments = {{40, 0.0, 1.0}, {40, 4.0, 1.0}, {40, 0.0, 1.0}, {40, 4.0, 1.0}};
    spec.seed = 99;
    const auto a = generate_series(spec);
    const auto b = generate_series(spec);
    CHECK(std::equal(a.series.values().begin(), a.series.values().end(), b.series.values().begin()));
    CHECK(a.truth.tau() == std::vector<std::size_t>{41, 81, 121});
    CHECK(a.truth.min_length() == 40);
    spec.seed = 100;
    const auto c = generate_series(spec);
    CHECK_FALSE(std::equal(a.series.values().begin(), a.series.values().end(), c.series.values().begin()));

    spec.noise = NoiseKind::StudentT;
    spec.seasonal_amplitude = 0.5;
    spec.outlier_count = 3;
    spec.outlier_magnitude = 10.0;
    const auto d = generate_series(spec);
    CHECK(d.series.size() == 160);
}

TEST_CASE("generated truth is always a valid changepoint vector") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        SynthSpec spec;
        const std::size_t k = 1 + rng() % 5;
        for (std::size_t i = 0; i < k; ++i)
            spec.segments.push_back({1 + rng() % 30, static_cast<double>(rng() % 7), 1.0});
        spec.seed = rng();
        const auto g = generate_series(spec);
        CHECK(g.truth.count() == k - 1);
        CHECK(Changepoints::is_valid(g.truth.tau(), g.series.size(), g.truth.min_length()));
    }
}

TEST_CASE("generate_series rejects bad specs") {
    SynthSpec spec;
    CHECK_THROWS_AS(generate_series(spec), Error);
    spec.segments = {{0, 0.0, 1.0}};
    CHECK_THROWS_AS(generate_series(spec), Error);
    spec.segments = {{5, 0.0, -1.0}};
    CHECK_THROWS_AS(generate_series(spec), Error);
}

TEST_CASE("enumerate_placements counts") {
    CHECK(enumerate_placements(10, 3, 1).size() == 5);
    CHECK(enumerate_placements(20, 10, 1) == std::vector<std::vector<std::size_t>>{{11}});
    CHECK(enumerate_placements(20, 10, 2).empty());
    CHECK(enumerate_placements(12, 4, 2) == std::vector<std::vector<std::size_t>>{{5, 9}});
    for (std::size_t T = 8; T <= 40; T += 4)
        for (std::size_t d = 2; d <= 6; ++d)
            for (std::size_t m = 0; m <= 3; ++m)
                CHECK(enumerate_placements(T, d, m).size() == oracle::count_placements(T, d, m));
}

TEST_CASE("brute_force_map guard and tiny case") {
    DetectionConfig cfg;
    cfg.d = 10;
    cfg.outliers.enabled = false;
    cfg.m_hat_override = 1;
    cfg.m_max = 3;
    std::vector<double> x(20, 0.0);
    std::fill(x.begin() + 10, x.end(), 3.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    for (auto& v : x)
        v += 0.1 * n01(rng);
    const auto o = brute_force_map(validate_series(x), cfg);
    // Only m = 0 and m = 1 (tau = 11) fit in T = 20 with d = 10.
    CHECK(o.per_m.size() == 2);
    CHECK(o.m_star == 1);
    CHECK(o.tau == std::vector<std::size_t>{11});

    try {
        brute_force_map(validate_series(std::vector<double>(61, 1.0)), cfg);
        FAIL("expected TooLargeForOracle");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLargeForOracle);
    }
    cfg.d = 2;
    cfg.m_hat_override = 4;
    cfg.m_max = 6;
    CHECK_THROWS_AS(brute_force_map(validate_series(std::vector<double>(40, 1.0)), cfg), Error);
}

TEST_CASE("score_detection examples") {
    const auto perfect = score_detection({41, 81, 121}, {41, 81, 121}, 2);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.mean_abs_error == 0.0);

    const auto near = score_detection({43, 80, 119}, {41, 81, 121}, 2);
    CHECK(near.f1 == 1.0);
    CHECK(near.mean_abs_error == doctest::Approx(5.0 / 3.0));

    const auto miss = score_detection({44}, {41, 81}, 2);
    CHECK(miss.matches.empty());
    CHECK(miss.precision == 0.0);
    CHECK(miss.recall == 0.0);
    CHECK(miss.f1 == 0.0);

    // One-to-one: two detections near one truth count once.
    const auto dup = score_detection({40, 42}, {41}, 2);
    CHECK(dup.matches.size() == 1);
    CHECK(dup.precision == 0.5);
    CHECK(dup.recall == 1.0);

    const auto empty = score_detection({}, {}, 2);
    CHECK(empty.precision == 1.0);
    CHECK(empty.recall == 1.0);
    const auto none = score_detection({}, {30}, 2);
    CHECK(none.precision == 1.0);
    CHECK(none.recall == 0.0);
}

TEST_CASE("score_detection swap symmetry") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::size_t> a, b;
        for (std::size_t i = 0, n = rng() % 6; i < n; ++i)
            a.push_back(1 + rng() % 40);
        for (std::size_t i = 0, n = rng() % 6; i < n; ++i)
            b.push_back(1 + rng() % 40);
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        const std::size_t tol = rng() % 4;
        const auto ab = score_detection(a, b, tol);
        const auto ba = score_detection(b, a, tol);
        CHECK(ab.precision == ba.recall);
        CHECK(ab.recall == ba.precision);
        CHECK(ab.f1 == ba.f1);
    }
}
