#include "tetra/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace tetra {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Prefix sums of x - c, with c the global mean, so that per-span variances
// do not suffer from cancellation on large raw counts.
class GaussianPrefix {
public:
    GaussianPrefix(std::span<const double> x, double sigma_floor)
        : sum_(x.size() + 1, 0.0), sumsq_(x.size() + 1, 0.0), floor_(sigma_floor) {
        double c = 0.0;
        for (double v : x)
            c += v;
        centre_ = c / static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double y = x[i] - centre_;
            sum_[i + 1] = sum_[i] + y;
            sumsq_[i + 1] = sumsq_[i] + y * y;
        }
    }

    SegmentFit fit(std::size_t s, std::size_t t) const {
        const double n = static_cast<double>(t - s + 1);
        const double sum = sum_[t] - sum_[s - 1];
        const double sumsq = sumsq_[t] - sumsq_[s - 1];
        const double mean = sum / n;
        const double rss = std::max(sumsq - sum * mean, 0.0);
        const double sigma = std::max(std::sqrt(rss / n), floor_);
        const double loglik = -0.5 * n * kLog2Pi - n * std::log(sigma) - rss / (2.0 * sigma * sigma);
        return {loglik, FitParams{mean + centre_, sigma, 0, true}};
    }

private:
    std::vector<double> sum_;
    std::vector<double> sumsq_;
    double centre_ = 0.0;
    double floor_;
};

SegmentFit student_t_segment(std::span<const double> values, const ModelChoice& model) {
    const FitParams p = fit_student_t_em(values, model.nu, model.em_tol, model.em_max_iter,
                                         model.sigma_floor);
    return {student_t_loglik(values, p.mu, p.sigma, model.nu), p};
}

void check_span(const TimeSeries& series, std::size_t s, std::size_t t, std::size_t d) {
    if (s < 1 || t > series.size() || s > t || t - s + 1 < d)
        throw Error(ErrorCode::SegmentTooShort,
                    "span [" + std::to_string(s) + ", " + std::to_string(t) +
                        "] is invalid or shorter than " + std::to_string(d));
}

} // namespace

FitParams fit_gaussian_mle(std::span<const double> values, double sigma_floor) {
    if (values.empty())
        throw Error(ErrorCode::EmptySegment, "cannot fit an empty segment");
    const double n = static_cast<double>(values.size());
    double mu = 0.0;
    for (double v : values)
        mu += v;
    mu /= n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mu) * (v - mu);
    return {mu, std::max(std::sqrt(ss / n), sigma_floor), 0, true};
}

double gaussian_loglik(std::span<const double> values, double mu, double sigma) {
    double acc = 0.0;
    for (double v : values) {
        const double z = (v - mu) / sigma;
        acc += -0.5 * z * z;
    }
    const double n = static_cast<double>(values.size());
    return acc - n * (0.5 * kLog2Pi + std::log(sigma));
}

double student_t_loglik(std::span<const double> values, double mu, double sigma, double nu) {
    const double n = static_cast<double>(values.size());
    const double norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                        0.5 * std::log(nu * std::numbers::pi) - std::log(sigma);
    double acc = 0.0;
    for (double v : values) {
        const double z = (v - mu) / sigma;
        acc += std::log1p(z * z / nu);
    }
    return n * norm - 0.5 * (nu + 1.0) * acc;
}

FitParams fit_student_t_em(std::span<const double> values, double nu, double tol, int max_iter,
                           double sigma_floor, std::vector<double>* loglik_trace) {
    if (values.empty())
        throw Error(ErrorCode::EmptySegment, "cannot fit an empty segment");
    if (!(nu > 0.0))
        throw Error(ErrorCode::InvalidConfig, "nu must be > 0");
    FitParams p = fit_gaussian_mle(values, sigma_floor);
    p.converged = false;
    if (loglik_trace)
        loglik_trace->push_back(student_t_loglik(values, p.mu, p.sigma, nu));

    const double n = static_cast<double>(values.size());
    std::vector<double> w(values.size());
    for (int iter = 1; iter <= max_iter; ++iter) {
        double wsum = 0.0;
        double wx = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double z = (values[i] - p.mu) / p.sigma;
            w[i] = (nu + 1.0) / (nu + z * z);
            wsum += w[i];
            wx += w[i] * values[i];
        }
        const double mu = wx / wsum;
        double wss = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            wss += w[i] * (values[i] - mu) * (values[i] - mu);
        const double sigma = std::max(std::sqrt(wss / n), sigma_floor);

        const double change = std::abs(mu - p.mu) + std::abs(sigma - p.sigma);
        p.mu = mu;
        p.sigma = sigma;
        p.n_iter = iter;
        if (loglik_trace)
            loglik_trace->push_back(student_t_loglik(values, p.mu, p.sigma, nu));
        if (change < tol) {
            p.converged = true;
            break;
        }
    }
    return p;
}

SegmentFit segment_fit(const TimeSeries& series, std::size_t s, std::size_t t, std::size_t d,
                       const ModelChoice& model) {
    check_span(series, s, t, d);
    if (model.kind == ModelKind::GaussianPlugin)
        return GaussianPrefix(series.values(), model.sigma_floor).fit(s, t);
    return student_t_segment(series.values().subspan(s - 1, t - s + 1), model);
}

double segment_loglik(const TimeSeries& series, std::size_t s, std::size_t t, std::size_t d,
                      const ModelChoice& model) {
    return segment_fit(series, s, t, d, model).loglik;
}

SegmentLikelihoodTable::SegmentLikelihoodTable(std::size_t T, std::size_t d)
    : T_(T), d_(d), row_offset_(T + 2, 0) {
    std::size_t total = 0;
    for (std::size_t s = 1; s <= T; ++s) {
        row_offset_[s] = total;
        if (T + 1 >= s + d)
            total += T + 2 - s - d;
    }
    row_offset_[T + 1] = total;
    loglik_.resize(total);
    params_.resize(total);
}

std::size_t SegmentLikelihoodTable::cell(std::size_t s, std::size_t t) const {
    if (!contains(s, t))
        throw Error(ErrorCode::SegmentTooShort,
                    "no cell for [" + std::to_string(s) + ", " + std::to_string(t) + "]");
    return row_offset_[s] + (t - s + 1 - d_);
}

SegmentLikelihoodTable build_loglik_table(const TimeSeries& series, std::size_t d,
                                          const ModelChoice& model) {
    const std::size_t T = series.size();
    if (d == 0 || T < d)
        throw Error(ErrorCode::SeriesTooShort,
                    "series of length " + std::to_string(T) + " is shorter than d");
    SegmentLikelihoodTable table(T, d);
    const auto x = series.values();

    if (model.kind == ModelKind::GaussianPlugin) {
        const GaussianPrefix prefix(x, model.sigma_floor);
        for (std::size_t s = 1; s + d - 1 <= T; ++s)
            for (std::size_t t = s + d - 1; t <= T; ++t) {
                const auto fit = prefix.fit(s, t);
                const std::size_t c = table.cell(s, t);
                table.loglik_[c] = fit.loglik;
                table.params_[c] = fit.params;
            }
        return table;
    }

    // Student-t cells are independent EM fits; rows are dealt round-robin
    // to workers so results do not depend on the thread count.
    const std::size_t rows = T - d + 1;
    auto fill_rows = [&](std::size_t first, std::size_t stride) {
        for (std::size_t s = 1 + first; s <= rows; s += stride)
            for (std::size_t t = s + d - 1; t <= T; ++t) {
                const auto fit = student_t_segment(x.subspan(s - 1, t - s + 1), model);
                const std::size_t c = table.cell(s, t);
                table.loglik_[c] = fit.loglik;
                table.params_[c] = fit.params;
            }
    };
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(rows / 8, 1));
    if (workers <= 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(fill_rows, w, workers);
    }
    return table;
}

} // namespace tetra
