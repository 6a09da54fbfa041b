#include "tetra/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace tetra {

namespace {

int parse_fixed_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::ParseError, "bad date '" + std::string(whole) + "'");
    return value;
}

} // namespace

Date parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(ErrorCode::ParseError, "bad date '" + std::string(text) + "'");
    const int y = parse_fixed_int(text.substr(0, 4), text);
    const int m = parse_fixed_int(text.substr(5, 2), text);
    const int d = parse_fixed_int(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw Error(ErrorCode::ParseError, "bad date '" + std::string(text) + "'");
    return Date{ymd};
}

std::string format_iso_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

const std::vector<Date>& TimeSeries::dates() const {
    if (!dates_)
        throw std::logic_error("series has no dates");
    return *dates_;
}

std::optional<Date> TimeSeries::date_at(std::size_t t) const {
    if (!dates_ || t == 0 || t > dates_->size())
        return std::nullopt;
    return (*dates_)[t - 1];
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    if (values.size() != values_.size())
        throw Error(ErrorCode::LengthMismatch, "replacement values differ in length");
    return TimeSeries(std::move(values), dates_);
}

TimeSeries validate_series(std::vector<double> values, std::optional<std::vector<Date>> dates,
                           DateGaps gaps) {
    if (values.empty())
        throw Error(ErrorCode::SeriesTooShort, "series is empty");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::NonFinite, "value is not finite", static_cast<std::int64_t>(i));
    if (dates) {
        if (dates->size() != values.size())
            throw Error(ErrorCode::LengthMismatch, "dates and values differ in length");
        for (std::size_t i = 1; i < dates->size(); ++i) {
            const auto step = ((*dates)[i] - (*dates)[i - 1]).count();
            if (step <= 0)
                throw Error(ErrorCode::NonMonotonicTimestamps, "dates must increase",
                            static_cast<std::int64_t>(i));
            if (step != 1 && gaps == DateGaps::Reject)
                throw Error(ErrorCode::NonContiguousDates,
                            "gap before " + format_iso_date((*dates)[i]),
                            static_cast<std::int64_t>(i));
        }
    }
    return TimeSeries(std::move(values), std::move(dates));
}

std::optional<std::size_t> max_feasible_m(std::size_t T, std::size_t d) noexcept {
    if (d == 0 || T < d)
        return std::nullopt;
    return T / d - 1;
}

Changepoints::Changepoints(std::vector<std::size_t> tau, std::size_t T, std::size_t d)
    : tau_(std::move(tau)), T_(T), d_(d) {
    if (!is_valid(tau_, T_, d_))
        throw Error(ErrorCode::InvalidChangepoints,
                    "changepoints violate bounds or minimum spacing " + std::to_string(d));
}

bool Changepoints::is_valid(std::span<const std::size_t> tau, std::size_t T,
                            std::size_t d) noexcept {
    if (d == 0 || T == 0)
        return false;
    std::size_t prev = 1;
    for (std::size_t t : tau) {
        if (t <= prev || t > T || t - prev < d)
            return false;
        prev = t;
    }
    return T + 1 - prev >= d;
}

std::vector<std::size_t> Changepoints::boundaries() const {
    std::vector<std::size_t> out;
    out.reserve(tau_.size() + 2);
    out.push_back(1);
    out.insert(out.end(), tau_.begin(), tau_.end());
    out.push_back(T_ + 1);
    return out;
}

std::string_view to_string(ModelKind kind) noexcept {
    return kind == ModelKind::GaussianPlugin ? "gaussian_plugin" : "student_t_em";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "gaussian_plugin" || text == "gaussian")
        return ModelKind::GaussianPlugin;
    if (text == "student_t_em" || text == "student_t")
        return ModelKind::StudentTEm;
    throw Error(ErrorCode::InvalidConfig, "unknown model '" + std::string(text) + "'");
}

std::string_view to_string(GapPriorKind) noexcept { return "uniform"; }

GapPriorKind parse_gap_prior_kind(std::string_view text) {
    if (text == "uniform")
        return GapPriorKind::Uniform;
    throw Error(ErrorCode::InvalidConfig, "unknown gap prior '" + std::string(text) + "'");
}

double log_num_placements(std::size_t T, std::size_t d, std::size_t m) {
    if (!is_feasible(T, d, m))
        throw Error(ErrorCode::Infeasible, "no feasible placement", static_cast<std::int64_t>(m));
    // Stars and bars: distribute the T - (m+1)d slack samples over m+1 regimes.
    const double n = static_cast<double>(T - (m + 1) * d + m);
    const double k = static_cast<double>(m);
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double GapPrior::log_placement_prior(std::size_t T, std::size_t d, std::size_t m) const {
    switch (kind) {
    case GapPriorKind::Uniform:
        return -log_num_placements(T, d, m);
    }
    return 0.0;
}

std::string_view to_string(PenaltyKind kind) noexcept {
    return kind == PenaltyKind::Bic ? "bic" : "none";
}

PenaltyKind parse_penalty_kind(std::string_view text) {
    if (text == "bic")
        return PenaltyKind::Bic;
    if (text == "none")
        return PenaltyKind::None;
    throw Error(ErrorCode::InvalidConfig, "unknown complexity penalty '" + std::string(text) + "'");
}

double ComplexityPenalty::log_penalty(std::size_t T, std::size_t m) const {
    if (kind == PenaltyKind::None)
        return 0.0;
    return -0.5 * params_per_segment * static_cast<double>(m + 1) * std::log(static_cast<double>(T));
}

void DetectionConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (d < 2)
        fail("d must be >= 2");
    if (!(alpha > 0.0 && alpha < 1.0))
        fail("alpha must lie in (0, 1)");
    if (!(beta > 0.0))
        fail("beta must be > 0");
    if (!(model.nu > 0.0))
        fail("nu must be > 0");
    if (!(model.em_tol > 0.0) || model.em_max_iter < 1)
        fail("EM tolerance must be > 0 and max_iter >= 1");
    if (!(model.sigma_floor > 0.0))
        fail("sigma_floor must be > 0");
    if (!(penalty.params_per_segment >= 0.0))
        fail("penalty_params must be >= 0");
    if (outliers.window < 2)
        fail("outlier_window must be >= 2");
    if (!(outliers.threshold > 0.0))
        fail("outlier_threshold must be > 0");
    if (!(cusum_prominence > 0.0 && cusum_prominence < 1.0))
        fail("cusum_prominence must lie in (0, 1)");
    if (smooth.window % 2 == 0 || smooth.window <= smooth.degree)
        throw Error(ErrorCode::BadWindow, "smooth_window must be odd and > smooth_degree");
}

} // namespace tetra
