#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/error.hpp"

namespace tetra {

using Date = std::chrono::sys_days;

// ISO-8601 "YYYY-MM-DD" only.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

enum class DateGaps { Reject, Allow };

// Ordered observations x_1..x_T, optionally decorated with daily dates.
// All math in the library works on 1-based indices; dates only label reports.
class TimeSeries {
public:
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t offset) const { return values_[offset]; }

    bool has_dates() const noexcept { return dates_.has_value(); }
    const std::vector<Date>& dates() const;
    // Date of 1-based index t, if the series is dated.
    std::optional<Date> date_at(std::size_t t) const;

    // Same timestamps, new values (length must match).
    TimeSeries with_values(std::vector<double> values) const;

    friend TimeSeries validate_series(std::vector<double> values,
                                      std::optional<std::vector<Date>> dates,
                                      DateGaps gaps);

private:
    TimeSeries(std::vector<double> values, std::optional<std::vector<Date>> dates)
        : values_(std::move(values)), dates_(std::move(dates)) {}

    std::vector<double> values_;
    std::optional<std::vector<Date>> dates_;
};

// Errors: SeriesTooShort (empty), NonFinite(offset), LengthMismatch,
// NonMonotonicTimestamps(offset), NonContiguousDates(offset) unless gaps allowed.
TimeSeries validate_series(std::vector<double> values,
                           std::optional<std::vector<Date>> dates = std::nullopt,
                           DateGaps gaps = DateGaps::Reject);

// A series of length T can host m changepoints with every regime >= d long
// iff T >= (m+1)d.
constexpr bool is_feasible(std::size_t T, std::size_t d, std::size_t m) noexcept {
    return T >= (m + 1) * d;
}

// Largest feasible m, or nullopt when even a single segment does not fit.
std::optional<std::size_t> max_feasible_m(std::size_t T, std::size_t d) noexcept;

// Changepoint locations. tau_j is the 1-based index of the first observation
// of regime j+1; sentinels tau_0 = 1 and tau_{m+1} = T+1 are implicit.
class Changepoints {
public:
    // Errors: InvalidChangepoints when bounds or spacing are violated.
    Changepoints(std::vector<std::size_t> tau, std::size_t T, std::size_t d);

    static bool is_valid(std::span<const std::size_t> tau, std::size_t T, std::size_t d) noexcept;

    std::size_t count() const noexcept { return tau_.size(); }
    std::size_t series_length() const noexcept { return T_; }
    std::size_t min_length() const noexcept { return d_; }
    const std::vector<std::size_t>& tau() const noexcept { return tau_; }

    // Boundaries including both sentinels: 1, tau_1, ..., tau_m, T+1.
    std::vector<std::size_t> boundaries() const;

    friend bool operator==(const Changepoints&, const Changepoints&) = default;

private:
    std::vector<std::size_t> tau_;
    std::size_t T_;
    std::size_t d_;
};

enum class ModelKind { GaussianPlugin, StudentTEm };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

struct ModelChoice {
    ModelKind kind = ModelKind::StudentTEm;
    double nu = 4.0;
    double em_tol = 1e-8;
    int em_max_iter = 200;
    double sigma_floor = 1e-6;
};

enum class GapPriorKind { Uniform };

std::string_view to_string(GapPriorKind kind) noexcept;
GapPriorKind parse_gap_prior_kind(std::string_view text);

// Prior over changepoint placements given m. For the uniform kind every
// feasible placement gets mass 1/N(m) with N(m) = C(T - (m+1)d + m, m).
struct GapPrior {
    GapPriorKind kind = GapPriorKind::Uniform;

    double log_placement_prior(std::size_t T, std::size_t d, std::size_t m) const;
};

// log C(T - (m+1)d + m, m). Requires is_feasible(T, d, m).
double log_num_placements(std::size_t T, std::size_t d, std::size_t m);

enum class PenaltyKind { None, Bic };

std::string_view to_string(PenaltyKind kind) noexcept;
PenaltyKind parse_penalty_kind(std::string_view text);

// Occam term added to log P(m) + log P(x | m) during model selection. The
// Schwarz form charges (k/2) log T for each of the m+1 regimes, k being the
// number of parameters fitted per regime. It is constant in the placement,
// so MAP locations for a given m are unaffected.
struct ComplexityPenalty {
    PenaltyKind kind = PenaltyKind::Bic;
    double params_per_segment = 2.0;

    double log_penalty(std::size_t T, std::size_t m) const;
};

struct OutlierParams {
    bool enabled = true;
    std::size_t window = 7;
    double threshold = 3.0;
};

struct ScaleParams {
    bool enabled = true;
};

struct SmoothParams {
    bool enabled = false;
    std::size_t window = 7;
    std::size_t degree = 2;
};

struct DetectionConfig {
    std::size_t d = 15; // minimum regime length in samples
    double alpha = 0.9;
    double beta = 2.0;
    std::optional<std::size_t> m_hat_override;
    ModelChoice model;
    GapPrior gap_prior;
    ComplexityPenalty penalty;
    OutlierParams outliers;
    ScaleParams scale;
    SmoothParams smooth;
    std::optional<std::size_t> m_max; // defaults to floor(T/d) - 1
    double cusum_prominence = 0.05;

    // Errors: InvalidConfig for knob-range violations, BadWindow for
    // Savitzky-Golay window/degree violations.
    void validate() const;
};

} // namespace tetra
