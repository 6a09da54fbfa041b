#include "tetra/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace tetra {

namespace {

void check_savgol_args(std::size_t window, std::size_t degree) {
    if (window % 2 == 0 || window <= degree)
        throw Error(ErrorCode::BadWindow, "window must be odd and greater than degree");
}

// Projection onto polynomials of degree <= p sampled at the window offsets.
// Offsets are rescaled to [-1, 1] so the Vandermonde stays well conditioned.
Eigen::MatrixXd savgol_hat_matrix(std::size_t window, std::size_t degree) {
    const auto w = static_cast<Eigen::Index>(window);
    const auto cols = static_cast<Eigen::Index>(degree + 1);
    const double half = window > 1 ? static_cast<double>(window - 1) / 2.0 : 1.0;
    Eigen::MatrixXd vander(w, cols);
    for (Eigen::Index i = 0; i < w; ++i) {
        const double z = (static_cast<double>(i) - half) / half;
        double power = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            vander(i, j) = power;
            power *= z;
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(vander);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(w, cols);
    return q * q.transpose();
}

} // namespace

std::pair<TimeSeries, PreprocessTrace> remove_outliers(const TimeSeries& series,
                                                       std::size_t window, double threshold) {
    if (window < 2)
        throw Error(ErrorCode::InvalidConfig, "outlier window must be >= 2");
    if (!(threshold > 0.0))
        throw Error(ErrorCode::InvalidConfig, "outlier threshold must be > 0");
    const auto x = series.values();
    const std::size_t n = x.size();
    if (n <= window)
        throw Error(ErrorCode::SeriesTooShort, "series must be longer than the outlier window");

    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x)
        ss += (v - mean) * (v - mean);
    const double cutoff = threshold * std::sqrt(ss / static_cast<double>(n));

    std::vector<double> out(x.begin(), x.end());
    PreprocessTrace trace;
    double window_sum = 0.0;
    for (std::size_t i = 0; i < window; ++i)
        window_sum += x[i];
    for (std::size_t i = window; i < n; ++i) {
        const double trailing = window_sum / static_cast<double>(window);
        if (std::abs(x[i] - trailing) > cutoff) {
            out[i] = trailing;
            trace.replaced_outliers.push_back({i, x[i], trailing});
        }
        window_sum += x[i] - x[i - window];
    }
    return {series.with_values(std::move(out)), std::move(trace)};
}

std::pair<TimeSeries, PreprocessTrace> minmax_scale(const TimeSeries& series) {
    const auto x = series.values();
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> out(x.size(), 0.0);
    if (hi > lo) {
        const double range = hi - lo;
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = (x[i] - lo) / range;
    }
    PreprocessTrace trace;
    trace.scaled = true;
    trace.scale_min = lo;
    trace.scale_max = hi;
    return {series.with_values(std::move(out)), std::move(trace)};
}

std::vector<double> savgol_weights(std::size_t window, std::size_t degree,
                                   std::size_t eval_offset) {
    check_savgol_args(window, degree);
    if (eval_offset >= window)
        throw Error(ErrorCode::BadWindow, "evaluation offset outside the window");
    const Eigen::MatrixXd hat = savgol_hat_matrix(window, degree);
    std::vector<double> w(window);
    for (std::size_t j = 0; j < window; ++j)
        w[j] = hat(static_cast<Eigen::Index>(eval_offset), static_cast<Eigen::Index>(j));
    return w;
}

TimeSeries savgol_smooth(const TimeSeries& series, std::size_t window, std::size_t degree) {
    check_savgol_args(window, degree);
    const auto x = series.values();
    const std::size_t n = x.size();
    if (n < window)
        throw Error(ErrorCode::BadWindow, "series shorter than the smoothing window");

    const Eigen::MatrixXd hat = savgol_hat_matrix(window, degree);
    const std::size_t half = (window - 1) / 2;
    auto apply = [&](std::size_t row, std::size_t start) {
        double acc = 0.0;
        for (std::size_t j = 0; j < window; ++j)
            acc += hat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) * x[start + j];
        return acc;
    };

    std::vector<double> out(n);
    for (std::size_t i = 0; i < half; ++i) {
        out[i] = apply(i, 0);
        out[n - half + i] = apply(half + 1 + i, n - window);
    }
    for (std::size_t i = half; i + half < n; ++i)
        out[i] = apply(half, i - half);
    return series.with_values(std::move(out));
}

std::pair<TimeSeries, PreprocessTrace> preprocess_pipeline(const TimeSeries& series,
                                                           const DetectionConfig& cfg) {
    TimeSeries current = series;
    PreprocessTrace trace;
    if (cfg.outliers.enabled) {
        auto [cleaned, step] = remove_outliers(current, cfg.outliers.window, cfg.outliers.threshold);
        current = std::move(cleaned);
        trace.replaced_outliers = std::move(step.replaced_outliers);
    }
    if (cfg.scale.enabled) {
        auto [scaled, step] = minmax_scale(current);
        current = std::move(scaled);
        trace.scaled = true;
        trace.scale_min = step.scale_min;
        trace.scale_max = step.scale_max;
    }
    if (cfg.smooth.enabled) {
        current = savgol_smooth(current, cfg.smooth.window, cfg.smooth.degree);
        trace.smoothed = true;
        trace.smooth_window = cfg.smooth.window;
        trace.smooth_degree = cfg.smooth.degree;
    }
    return {std::move(current), std::move(trace)};
}

} // namespace tetra
