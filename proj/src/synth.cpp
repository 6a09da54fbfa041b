#include "tetra/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "tetra/estimate.hpp"
#include "tetra/model.hpp"
#include "tetra/pipeline.hpp"
#include "tetra/preprocess.hpp"

namespace tetra {

void SynthSpec::validate() const {
    if (segments.empty())
        throw Error(ErrorCode::InvalidConfig, "synthetic spec needs at least one segment");
    for (const auto& seg : segments) {
        if (seg.length == 0)
            throw Error(ErrorCode::InvalidConfig, "segment lengths must be >= 1");
        if (!(seg.noise_scale >= 0.0) || !std::isfinite(seg.mean))
            throw Error(ErrorCode::InvalidConfig, "noise scale must be >= 0 and means finite");
    }
    if (noise == NoiseKind::StudentT && !(nu > 0.0))
        throw Error(ErrorCode::InvalidConfig, "nu must be > 0");
    if (seasonal_amplitude && seasonal_period == 0)
        throw Error(ErrorCode::InvalidConfig, "seasonal period must be >= 1");
}

SyntheticSeries generate_series(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::student_t_distribution<double> student(spec.nu);

    std::vector<double> x;
    std::vector<std::size_t> truth;
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < spec.segments.size(); ++k) {
        const auto& seg = spec.segments[k];
        if (k > 0)
            truth.push_back(x.size() + 1);
        shortest = std::min(shortest, seg.length);
        for (std::size_t i = 0; i < seg.length; ++i) {
            const double eps = spec.noise == NoiseKind::Gaussian ? gauss(rng) : student(rng);
            x.push_back(seg.mean + seg.noise_scale * eps);
        }
    }
    if (spec.seasonal_amplitude) {
        const double period = static_cast<double>(spec.seasonal_period);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += *spec.seasonal_amplitude *
                    std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period);
    }
    if (spec.outlier_count > 0) {
        std::uniform_int_distribution<std::size_t> where(0, x.size() - 1);
        std::bernoulli_distribution up(0.5);
        for (std::size_t i = 0; i < spec.outlier_count; ++i) {
            const std::size_t at = where(rng);
            x[at] += up(rng) ? spec.outlier_magnitude : -spec.outlier_magnitude;
        }
    }
    const std::size_t T = x.size();
    return {validate_series(std::move(x)), Changepoints(std::move(truth), T, shortest)};
}

std::vector<std::vector<std::size_t>> enumerate_placements(std::size_t T, std::size_t d,
                                                           std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    if (!is_feasible(T, d, m))
        return out;
    std::vector<std::size_t> tau(m);
    // Depth-first: tau[j] ranges so that every later regime still fits.
    auto rec = [&](auto&& self, std::size_t j, std::size_t prev) -> void {
        if (j == m) {
            out.push_back(tau);
            return;
        }
        const std::size_t last = T + 1 - (m - j) * d;
        for (std::size_t t = prev + d; t <= last; ++t) {
            tau[j] = t;
            self(self, j + 1, t);
        }
    };
    rec(rec, 0, 1);
    return out;
}

OracleResult brute_force_map(const TimeSeries& series, const DetectionConfig& cfg) {
    cfg.validate();
    const std::size_t T = series.size();
    if (T > 60)
        throw Error(ErrorCode::TooLargeForOracle, "oracle limited to T <= 60",
                    static_cast<std::int64_t>(T));
    const std::size_t m_max = effective_m_max(cfg, T);
    const auto processed = preprocess_pipeline(series, cfg).first;
    const std::size_t m_hat = cfg.m_hat_override
                                  ? *cfg.m_hat_override
                                  : estimate_mhat(processed, cfg.cusum_prominence);
    const auto candidates = build_candidate_set(m_hat, cfg.beta, cfg.alpha, m_max, T, cfg.d);
    if (candidates.members.back() > 3)
        throw Error(ErrorCode::TooLargeForOracle, "oracle limited to m <= 3",
                    static_cast<std::int64_t>(candidates.members.back()));

    std::map<std::pair<std::size_t, std::size_t>, double> memo;
    auto seg = [&](std::size_t s, std::size_t t) {
        auto [it, fresh] = memo.try_emplace({s, t}, 0.0);
        if (fresh)
            it->second = segment_loglik(processed, s, t, cfg.d, cfg.model);
        return it->second;
    };

    OracleResult result{0, {}, -std::numeric_limits<double>::infinity(), {}};
    double best_joint = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.members.size(); ++i) {
        const std::size_t m = candidates.members[i];
        const auto placements = enumerate_placements(T, cfg.d, m);
        if (placements.empty())
            continue;
        std::vector<double> scores;
        scores.reserve(placements.size());
        OracleModel om{m, placements.size(), candidates.log_prior[i], 0.0,
                       cfg.penalty.log_penalty(T, m), 0.0,
                       -std::numeric_limits<double>::infinity(), {}};
        for (const auto& tau : placements) {
            // Summed right to left, the same association as the recursion.
            std::size_t end = T;
            double score = 0.0;
            for (std::size_t j = m; j > 0; --j) {
                score = seg(tau[j - 1], end) + score;
                end = tau[j - 1] - 1;
            }
            score = m == 0 ? seg(1, T) : seg(1, end) + score;
            scores.push_back(score);
            if (score > om.best_score) {
                om.best_score = score;
                om.best_tau = tau;
            }
        }
        const double peak = *std::max_element(scores.begin(), scores.end());
        double acc = 0.0;
        for (double s : scores)
            acc += std::exp(s - peak);
        om.log_evidence = peak + std::log(acc) - std::log(static_cast<double>(placements.size()));
        om.log_joint = om.log_prior + om.log_evidence + om.log_penalty;
        if (om.log_joint > best_joint) {
            best_joint = om.log_joint;
            result.m_star = m;
            result.tau = om.best_tau;
            result.score = om.best_score;
        }
        result.per_m.push_back(std::move(om));
    }
    return result;
}

EvalReport score_detection(const std::vector<std::size_t>& detected,
                           const std::vector<std::size_t>& truth, std::size_t tolerance) {
    struct Pair {
        std::size_t err, lo, di, ti;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < detected.size(); ++i)
        for (std::size_t j = 0; j < truth.size(); ++j) {
            const std::size_t err = detected[i] > truth[j] ? detected[i] - truth[j]
                                                           : truth[j] - detected[i];
            if (err <= tolerance)
                pairs.push_back({err, std::min(detected[i], truth[j]), i, j});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        // Keyed on positions, not list order, so swapping the roles is symmetric.
        return std::tie(a.err, a.lo, a.di, a.ti) < std::tie(b.err, b.lo, b.di, b.ti);
    });

    EvalReport report{tolerance, {}, 1.0, 1.0, 0.0, 0.0};
    std::vector<bool> used_d(detected.size(), false), used_t(truth.size(), false);
    double err_sum = 0.0;
    for (const auto& p : pairs) {
        if (used_d[p.di] || used_t[p.ti])
            continue;
        used_d[p.di] = used_t[p.ti] = true;
        report.matches.push_back({detected[p.di], truth[p.ti], p.err});
        err_sum += static_cast<double>(p.err);
    }
    std::sort(report.matches.begin(), report.matches.end(),
              [](const DetectionMatch& a, const DetectionMatch& b) { return a.truth < b.truth; });
    const double hits = static_cast<double>(report.matches.size());
    if (!detected.empty())
        report.precision = hits / static_cast<double>(detected.size());
    if (!truth.empty())
        report.recall = hits / static_cast<double>(truth.size());
    const double denom = report.precision + report.recall;
    report.f1 = denom > 0.0 ? 2.0 * report.precision * report.recall / denom : 0.0;
    report.mean_abs_error = hits > 0.0 ? err_sum / hits : 0.0;
    return report;
}

} // namespace tetra
