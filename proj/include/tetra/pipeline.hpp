#pragma once

#include <cstddef>
#include <vector>

#include "tetra/core.hpp"
#include "tetra/estimate.hpp"
#include "tetra/preprocess.hpp"
#include "tetra/solver.hpp"

namespace tetra {

struct Detection {
    TimeSeries processed;
    PreprocessTrace trace;
    std::size_t m_hat;
    bool m_hat_overridden;
    std::size_t m_max; // effective cap after defaulting and feasibility
    CandidateSet candidates;
    ChangepointResult result;
    std::vector<double> raw_segment_means; // per result segment, on the input scale
};

// Effective candidate cap: cfg.m_max if set, else floor(T/d) - 1.
std::size_t effective_m_max(const DetectionConfig& cfg, std::size_t T);

// Preprocess -> likelihood table -> m_hat -> candidate set -> model
// selection -> ranking.
Detection detect(const TimeSeries& series, const DetectionConfig& cfg);

} // namespace tetra
