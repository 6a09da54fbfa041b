#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tetra/core.hpp"

namespace tetra {

struct FitParams {
    double mu = 0.0;
    double sigma = 1.0;
    int n_iter = 0;
    bool converged = true;
};

// Sample mean and ML (divide-by-n) standard deviation, sigma floored.
FitParams fit_gaussian_mle(std::span<const double> values, double sigma_floor = 1e-6);

// Fixed-nu Student-t location/scale by EM, started from the Gaussian MLE.
// When `loglik_trace` is given it receives the log-likelihood at the start
// and after every iteration.
FitParams fit_student_t_em(std::span<const double> values, double nu, double tol = 1e-8,
                           int max_iter = 200, double sigma_floor = 1e-6,
                           std::vector<double>* loglik_trace = nullptr);

double gaussian_loglik(std::span<const double> values, double mu, double sigma);
double student_t_loglik(std::span<const double> values, double mu, double sigma, double nu);

struct SegmentFit {
    double loglik;
    FitParams params;
};

// Plug-in log-likelihood of x_s..x_t (1-based, inclusive) under the fitted
// model. Errors: SegmentTooShort when t - s + 1 < d or the span is out of range.
double segment_loglik(const TimeSeries& series, std::size_t s, std::size_t t, std::size_t d,
                      const ModelChoice& model);
SegmentFit segment_fit(const TimeSeries& series, std::size_t s, std::size_t t, std::size_t d,
                       const ModelChoice& model);

// Cached L(s, t) for every span with t - s + 1 >= d.
class SegmentLikelihoodTable {
public:
    std::size_t series_length() const noexcept { return T_; }
    std::size_t min_length() const noexcept { return d_; }
    std::size_t cell_count() const noexcept { return loglik_.size(); }

    bool contains(std::size_t s, std::size_t t) const noexcept {
        return s >= 1 && t <= T_ && s <= t && t - s + 1 >= d_;
    }
    double loglik(std::size_t s, std::size_t t) const { return loglik_[cell(s, t)]; }
    const FitParams& params(std::size_t s, std::size_t t) const { return params_[cell(s, t)]; }

    friend SegmentLikelihoodTable build_loglik_table(const TimeSeries&, std::size_t,
                                                     const ModelChoice&);

private:
    SegmentLikelihoodTable(std::size_t T, std::size_t d);
    std::size_t cell(std::size_t s, std::size_t t) const;

    std::size_t T_;
    std::size_t d_;
    std::vector<std::size_t> row_offset_; // first cell of row s (1-based)
    std::vector<double> loglik_;
    std::vector<FitParams> params_;
};

// Errors: SeriesTooShort when T < d.
SegmentLikelihoodTable build_loglik_table(const TimeSeries& series, std::size_t d,
                                          const ModelChoice& model);

} // namespace tetra
