#pragma once

#include <cstddef>
#include <vector>

#include "tetra/core.hpp"

namespace tetra {

// Contiguous range of candidate changepoint counts around m_hat, with the
// discrete Laplacian prior renormalised over it.
struct CandidateSet {
    std::size_t m_hat = 0;
    std::vector<std::size_t> members; // ascending, contiguous
    std::vector<double> log_prior;    // parallel to members

    bool contains(std::size_t m) const noexcept;
    double log_prior_of(std::size_t m) const;
};

// S_t = sum_{i<=t} (x_i - mean).
std::vector<double> cusum_chart(const TimeSeries& series);

// Topographic prominence of every interior local extremum of `curve`, keyed
// by 0-based position. Plateaus count once, at their first sample.
struct Extremum {
    std::size_t offset;
    bool is_max;
    double prominence;
};
std::vector<Extremum> local_extrema(const std::vector<double>& curve);

// Number of CUSUM extrema whose prominence is at least h * (max S - min S).
std::size_t estimate_mhat(const TimeSeries& series, double prominence);

// Unnormalised: -|m - m_hat| / beta.
double laplace_log_pmf(std::size_t m, std::size_t m_hat, double beta);

// Grows {m_hat - r .. m_hat + r}, clipped to [0, min(m_max, floor(T/d) - 1)],
// until it holds at least alpha of the prior mass on that support.
// Errors: NoFeasibleM when T < d; InvalidConfig for alpha/beta out of range.
CandidateSet build_candidate_set(std::size_t m_hat, double beta, double alpha, std::size_t m_max,
                                 std::size_t T, std::size_t d);

} // namespace tetra
