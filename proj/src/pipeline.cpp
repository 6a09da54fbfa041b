#include "tetra/pipeline.hpp"

#include <algorithm>

#include "tetra/model.hpp"

namespace tetra {

std::size_t effective_m_max(const DetectionConfig& cfg, std::size_t T) {
    const auto feasible = max_feasible_m(T, cfg.d);
    if (!feasible)
        throw Error(ErrorCode::NoFeasibleM,
                    "series of length " + std::to_string(T) + " is shorter than d");
    return cfg.m_max ? std::min(*cfg.m_max, *feasible) : *feasible;
}

Detection detect(const TimeSeries& series, const DetectionConfig& cfg) {
    cfg.validate();
    const std::size_t m_max = effective_m_max(cfg, series.size());
    auto [processed, trace] = preprocess_pipeline(series, cfg);

    const auto table = build_loglik_table(processed, cfg.d, cfg.model);
    const bool overridden = cfg.m_hat_override.has_value();
    const std::size_t m_hat =
        overridden ? *cfg.m_hat_override : estimate_mhat(processed, cfg.cusum_prominence);
    auto candidates =
        build_candidate_set(m_hat, cfg.beta, cfg.alpha, m_max, processed.size(), cfg.d);
    auto result = select_model(table, candidates, cfg.gap_prior, cfg.penalty);

    std::vector<double> raw_means;
    const auto x = series.values();
    for (const auto& seg : result.segments) {
        double acc = 0.0;
        for (std::size_t t = seg.start; t <= seg.end; ++t)
            acc += x[t - 1];
        raw_means.push_back(acc / static_cast<double>(seg.end - seg.start + 1));
    }
    return {std::move(processed), std::move(trace),    m_hat,
            overridden,           m_max,               std::move(candidates),
            std::move(result),    std::move(raw_means)};
}

} // namespace tetra
