#include "tetra/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tetra {

bool CandidateSet::contains(std::size_t m) const noexcept {
    return std::binary_search(members.begin(), members.end(), m);
}

double CandidateSet::log_prior_of(std::size_t m) const {
    const auto it = std::lower_bound(members.begin(), members.end(), m);
    if (it == members.end() || *it != m)
        return -std::numeric_limits<double>::infinity();
    return log_prior[static_cast<std::size_t>(it - members.begin())];
}

std::vector<double> cusum_chart(const TimeSeries& series) {
    const auto x = series.values();
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> s(x.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] - mean;
        s[i] = acc;
    }
    return s;
}

std::vector<Extremum> local_extrema(const std::vector<double>& curve) {
    std::vector<Extremum> out;
    const std::size_t n = curve.size();
    if (n < 3)
        return out;

    // Walk the sign of the first difference, skipping flat steps; a sign flip
    // marks an extremum at the start of the plateau it ends on.
    int last_sign = 0;
    std::size_t plateau_start = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double diff = curve[i] - curve[i - 1];
        const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        if (sign == 0)
            continue;
        if (last_sign != 0 && sign != last_sign)
            out.push_back({plateau_start, last_sign > 0, 0.0});
        last_sign = sign;
        plateau_start = i;
    }

    for (auto& e : out) {
        const double sgn = e.is_max ? 1.0 : -1.0;
        const double peak = sgn * curve[e.offset];
        // Lowest point on each side before the curve climbs above the peak.
        double left_min = peak;
        for (std::size_t j = e.offset; j-- > 0;) {
            const double v = sgn * curve[j];
            if (v > peak)
                break;
            left_min = std::min(left_min, v);
        }
        double right_min = peak;
        for (std::size_t j = e.offset + 1; j < n; ++j) {
            const double v = sgn * curve[j];
            if (v > peak)
                break;
            right_min = std::min(right_min, v);
        }
        e.prominence = peak - std::max(left_min, right_min);
    }
    return out;
}

std::size_t estimate_mhat(const TimeSeries& series, double prominence) {
    if (!(prominence > 0.0 && prominence < 1.0))
        throw Error(ErrorCode::InvalidConfig, "prominence must lie in (0, 1)");
    const auto chart = cusum_chart(series);
    const auto [lo, hi] = std::minmax_element(chart.begin(), chart.end());
    const double range = *hi - *lo;
    if (!(range > 0.0))
        return 0;
    const double cut = prominence * range;
    std::size_t count = 0;
    for (const auto& e : local_extrema(chart))
        if (e.prominence >= cut)
            ++count;
    return count;
}

double laplace_log_pmf(std::size_t m, std::size_t m_hat, double beta) {
    const double gap = m > m_hat ? static_cast<double>(m - m_hat) : static_cast<double>(m_hat - m);
    return -gap / beta;
}

CandidateSet build_candidate_set(std::size_t m_hat, double beta, double alpha, std::size_t m_max,
                                 std::size_t T, std::size_t d) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
    if (!(beta > 0.0))
        throw Error(ErrorCode::InvalidConfig, "beta must be > 0");
    const auto feasible = max_feasible_m(T, d);
    if (!feasible)
        throw Error(ErrorCode::NoFeasibleM, "series shorter than one minimum-length segment");
    const std::size_t cap = std::min(m_max, *feasible);

    // Weights relative to the best member of the support, so the mass ratio
    // stays meaningful when m_hat lies beyond the cap.
    const std::size_t anchor = std::min(m_hat, cap);
    const double log_peak = laplace_log_pmf(anchor, m_hat, beta);
    std::vector<double> weight(cap + 1);
    double total = 0.0;
    for (std::size_t m = 0; m <= cap; ++m) {
        weight[m] = std::exp(laplace_log_pmf(m, m_hat, beta) - log_peak);
        total += weight[m];
    }

    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t r = 0;; ++r) {
        lo = m_hat > r ? m_hat - r : 0;
        hi = std::min(m_hat + r, cap);
        if (lo > hi)
            continue;
        double mass = 0.0;
        for (std::size_t m = lo; m <= hi; ++m)
            mass += weight[m];
        if (mass >= alpha * total || (lo == 0 && hi == cap))
            break;
    }

    CandidateSet set;
    set.m_hat = m_hat;
    double kept = 0.0;
    for (std::size_t m = lo; m <= hi; ++m)
        kept += weight[m];
    const double log_kept = std::log(kept);
    for (std::size_t m = lo; m <= hi; ++m) {
        set.members.push_back(m);
        set.log_prior.push_back(laplace_log_pmf(m, m_hat, beta) - log_peak - log_kept);
    }
    return set;
}

} // namespace tetra
