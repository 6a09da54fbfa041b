#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tetra/core.hpp"

namespace tetra {

struct OutlierReplacement {
    std::size_t offset; // 0-based position in the series
    double original;
    double replacement;
};

// Audit record of the preprocessing chain.
struct PreprocessTrace {
    std::vector<OutlierReplacement> replaced_outliers;
    bool scaled = false;
    double scale_min = 0.0;
    double scale_max = 0.0;
    bool smoothed = false;
    std::size_t smooth_window = 0;
    std::size_t smooth_degree = 0;
};

// Replaces x_t by the trailing mean of the W previous original values when
// |x_t - mean| > k * (population std of the whole original series). The first
// W points are never flagged.
std::pair<TimeSeries, PreprocessTrace> remove_outliers(const TimeSeries& series,
                                                       std::size_t window, double threshold);

// Maps to [0, 1]; a constant series maps to all zeros.
std::pair<TimeSeries, PreprocessTrace> minmax_scale(const TimeSeries& series);

// Savitzky-Golay weights evaluating the degree-p least-squares fit over
// offsets 0..w-1 at `eval_offset`. Row (w-1)/2 is the classic centre kernel.
std::vector<double> savgol_weights(std::size_t window, std::size_t degree,
                                   std::size_t eval_offset);

// Interior points use the centre kernel; the first and last (w-1)/2 points are
// evaluated off-centre on the first/last full window.
TimeSeries savgol_smooth(const TimeSeries& series, std::size_t window, std::size_t degree);

// Outlier removal, scaling, smoothing, in that order; disabled steps are identity.
std::pair<TimeSeries, PreprocessTrace> preprocess_pipeline(const TimeSeries& series,
                                                           const DetectionConfig& cfg);

} // namespace tetra
