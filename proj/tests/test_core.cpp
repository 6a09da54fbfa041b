#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "tetra/core.hpp"

using namespace tetra;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected tetra::Error");
    return ErrorCode::IoError;
}

template <typename F>
std::int64_t where_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.where().value_or(-1);
    }
    return -2;
}

} // namespace

TEST_CASE("validate_series accepts well-formed input") {
    const auto s = validate_series({1.0, 2.0, 3.0});
    CHECK(s.size() == 3);
    CHECK_FALSE(s.has_dates());
    CHECK(s[2] == 3.0);
}

TEST_CASE("validate_series rejects non-finite values with their offset") {
    auto bad = [] { validate_series({1.0, std::numeric_limits<double>::quiet_NaN()}); };
    CHECK(code_of(bad) == ErrorCode::NonFinite);
    CHECK(where_of(bad) == 1);
    CHECK(code_of([] { validate_series({std::numeric_limits<double>::infinity()}); }) ==
          ErrorCode::NonFinite);
}

TEST_CASE("validate_series checks dates") {
    auto backwards = [] {
        validate_series({1.0, 2.0}, std::vector<Date>{parse_iso_date("2013-01-02"),
                                                      parse_iso_date("2013-01-01")});
    };
    CHECK(code_of(backwards) == ErrorCode::NonMonotonicTimestamps);
    CHECK(where_of(backwards) == 1);

    CHECK(code_of([] { validate_series({1.0, 2.0}, std::vector<Date>{parse_iso_date("2013-01-01")}); }) ==
          ErrorCode::LengthMismatch);

    const std::vector<Date> gappy{parse_iso_date("2013-01-01"), parse_iso_date("2013-01-03")};
    CHECK(code_of([&] { validate_series({1.0, 2.0}, gappy); }) == ErrorCode::NonContiguousDates);
    CHECK(validate_series({1.0, 2.0}, gappy, DateGaps::Allow).size() == 2);
    CHECK(code_of([] { validate_series({}); }) == ErrorCode::SeriesTooShort);
}

TEST_CASE("iso dates round trip and reject garbage") {
    CHECK(format_iso_date(parse_iso_date("2012-10-29")) == "2012-10-29");
    CHECK(format_iso_date(parse_iso_date("2012-02-29")) == "2012-02-29");
    CHECK(code_of([] { parse_iso_date("2013-02-29"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_iso_date("2013/01/01"); }) == ErrorCode::ParseError);
}

TEST_CASE("Changepoints accepts exactly the spaced, in-range vectors") {
    // Independent restatement of the constraints, sentinels included.
    auto ok = [](const std::vector<std::size_t>& tau, std::size_t T, std::size_t d) {
        std::vector<long long> b{1};
        for (auto t : tau)
            b.push_back(static_cast<long long>(t));
        b.push_back(static_cast<long long>(T) + 1);
        for (std::size_t j = 1; j < b.size(); ++j)
            if (b[j] - b[j - 1] < static_cast<long long>(d))
                return false;
        for (auto t : tau)
            if (t < 2 || t > T)
                return false;
        return true;
    };
    std::mt19937_64 rng(11);
    std::size_t accepted = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        const std::size_t T = 5 + rng() % 40;
        const std::size_t d = 2 + rng() % 6;
        const std::size_t m = rng() % 4;
        std::vector<std::size_t> tau(m);
        for (auto& t : tau)
            t = rng() % (T + 3);
        std::sort(tau.begin(), tau.end());
        if (rng() % 3 == 0 && m > 1)
            std::swap(tau[0], tau[1]);
        const bool expect = ok(tau, T, d);
        CHECK(Changepoints::is_valid(tau, T, d) == expect);
        if (expect) {
            ++accepted;
            CHECK_NOTHROW(Changepoints(tau, T, d));
        } else {
            CHECK(code_of([&] { Changepoints(tau, T, d); }) == ErrorCode::InvalidChangepoints);
        }
    }
    CHECK(accepted > 100);
}

TEST_CASE("feasibility law and the stars-and-bars count") {
    for (std::size_t T = 1; T <= 30; ++T)
        for (std::size_t d = 2; d <= 7; ++d)
            for (std::size_t m = 0; m <= 4; ++m) {
                const std::size_t n = oracle::count_placements(T, d, m);
                CHECK((n > 0) == is_feasible(T, d, m));
                if (n > 0)
                    CHECK(std::exp(log_num_placements(T, d, m)) ==
                          doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
            }
    CHECK(oracle::count_placements(10, 3, 1) == 5);
    CHECK(std::exp(log_num_placements(10, 3, 1)) == doctest::Approx(5.0));
    CHECK(code_of([] { log_num_placements(12, 5, 2); }) == ErrorCode::Infeasible);
    CHECK(max_feasible_m(12, 5) == 1u);
    CHECK_FALSE(max_feasible_m(4, 5).has_value());
}

TEST_CASE("boundaries include both sentinels") {
    const Changepoints cp({21, 51}, 75, 20);
    CHECK(cp.boundaries() == std::vector<std::size_t>{1, 21, 51, 76});
    CHECK(Changepoints({}, 5, 5).boundaries() == std::vector<std::size_t>{1, 6});
}

TEST_CASE("DetectionConfig validation") {
    DetectionConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.d == 15);
    CHECK(cfg.alpha == 0.9);
    CHECK(cfg.beta == 2.0);
    CHECK(cfg.cusum_prominence == 0.05);

    auto broken = [](auto mutate) {
        DetectionConfig c;
        mutate(c);
        return code_of([&] { c.validate(); });
    };
    CHECK(broken([](DetectionConfig& c) { c.d = 1; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.alpha = 1.0; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.beta = 0.0; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.model.nu = -1.0; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.outliers.window = 1; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.outliers.threshold = 0.0; }) == ErrorCode::InvalidConfig);
    CHECK(broken([](DetectionConfig& c) { c.smooth.window = 6; }) == ErrorCode::BadWindow);
    CHECK(broken([](DetectionConfig& c) { c.smooth.window = 3; c.smooth.degree = 3; }) ==
          ErrorCode::BadWindow);
}

TEST_CASE("complexity penalty is linear in the number of regimes") {
    ComplexityPenalty bic;
    CHECK(bic.log_penalty(100, 0) == doctest::Approx(-std::log(100.0)));
    CHECK(bic.log_penalty(100, 3) == doctest::Approx(-4.0 * std::log(100.0)));
    ComplexityPenalty none{PenaltyKind::None};
    CHECK(none.log_penalty(100, 3) == 0.0);
}
