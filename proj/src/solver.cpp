#include "tetra/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tetra {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_feasible(std::size_t T, std::size_t d, std::size_t m) {
    if (!is_feasible(T, d, m))
        throw Error(ErrorCode::Infeasible,
                    "T=" + std::to_string(T) + " cannot hold " + std::to_string(m + 1) +
                        " regimes of length >= " + std::to_string(d),
                    static_cast<std::int64_t>(m));
}

} // namespace

EvidenceTable::EvidenceTable(const SegmentLikelihoodTable& table, std::size_t max_m)
    : T_(table.series_length()), d_(table.min_length()), max_m_(max_m),
      w_((max_m + 1) * (table.series_length() + 2), kNegInf) {
    require_feasible(T_, d_, max_m_);
    const std::size_t T = T_;
    const std::size_t d = d_;
    for (std::size_t t = 1; t + d <= T + 1; ++t)
        w_[t] = table.loglik(t, T);

    std::vector<double> terms;
    for (std::size_t k = 1; k <= max_m_; ++k) {
        double* row = &w_[k * (T + 2)];
        const double* next = &w_[(k - 1) * (T + 2)];
        // t leaves room for k+1 regimes; s is the start of the next regime.
        for (std::size_t t = 1; t + (k + 1) * d <= T + 1; ++t) {
            const std::size_t s_lo = t + d;
            const std::size_t s_hi = T + 1 - k * d;
            terms.clear();
            double peak = kNegInf;
            for (std::size_t s = s_lo; s <= s_hi; ++s) {
                const double v = table.loglik(t, s - 1) + next[s];
                terms.push_back(v);
                peak = std::max(peak, v);
            }
            double acc = 0.0;
            for (double v : terms)
                acc += std::exp(v - peak);
            row[t] = peak + std::log(acc);
        }
    }
}

double EvidenceTable::log_data_given_m(std::size_t m, const GapPrior& prior) const {
    if (m > max_m_)
        throw Error(ErrorCode::Infeasible, "m beyond evidence table", static_cast<std::int64_t>(m));
    return log_sum(m, 1) + prior.log_placement_prior(T_, d_, m);
}

double backward_sum(const SegmentLikelihoodTable& table, std::size_t m, const GapPrior& prior) {
    require_feasible(table.series_length(), table.min_length(), m);
    return EvidenceTable(table, m).log_data_given_m(m, prior);
}

MapSegmentation map_segmentation(const SegmentLikelihoodTable& table, std::size_t m,
                                 const GapPrior&) {
    const std::size_t T = table.series_length();
    const std::size_t d = table.min_length();
    require_feasible(T, d, m);

    // best[k][t]: max over completions of x_t..x_T with k changepoints left.
    const std::size_t stride = T + 2;
    std::vector<double> best((m + 1) * stride, kNegInf);
    std::vector<std::size_t> arg((m + 1) * stride, 0);
    for (std::size_t t = 1; t + d <= T + 1; ++t)
        best[t] = table.loglik(t, T);
    for (std::size_t k = 1; k <= m; ++k) {
        for (std::size_t t = 1; t + (k + 1) * d <= T + 1; ++t) {
            double top = kNegInf;
            std::size_t top_s = 0;
            for (std::size_t s = t + d; s <= T + 1 - k * d; ++s) {
                const double v = table.loglik(t, s - 1) + best[(k - 1) * stride + s];
                if (v > top) {
                    top = v;
                    top_s = s;
                }
            }
            best[k * stride + t] = top;
            arg[k * stride + t] = top_s;
        }
    }

    std::vector<std::size_t> tau;
    tau.reserve(m);
    std::size_t t = 1;
    for (std::size_t k = m; k >= 1; --k) {
        t = arg[k * stride + t];
        tau.push_back(t);
    }
    return {Changepoints(std::move(tau), T, d), best[m * stride + 1]};
}

std::vector<RankedChangepoint> rank_changepoints(const SegmentLikelihoodTable& table,
                                                 const Changepoints& tau) {
    const auto b = tau.boundaries();
    std::vector<RankedChangepoint> ranked;
    ranked.reserve(tau.count());
    for (std::size_t j = 1; j + 1 < b.size(); ++j) {
        const double split = table.loglik(b[j - 1], b[j] - 1) + table.loglik(b[j], b[j + 1] - 1);
        const double merged = table.loglik(b[j - 1], b[j + 1] - 1);
        ranked.push_back({b[j], split - merged});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedChangepoint& a, const RankedChangepoint& c) {
                         if (a.delta_score != c.delta_score)
                             return a.delta_score > c.delta_score;
                         return a.index < c.index;
                     });
    return ranked;
}

ChangepointResult select_model(const SegmentLikelihoodTable& table,
                               const CandidateSet& candidates, const GapPrior& prior,
                               const ComplexityPenalty& penalty) {
    const std::size_t T = table.series_length();
    const std::size_t d = table.min_length();
    std::vector<std::size_t> usable;
    std::vector<double> priors;
    for (std::size_t i = 0; i < candidates.members.size(); ++i)
        if (is_feasible(T, d, candidates.members[i])) {
            usable.push_back(candidates.members[i]);
            priors.push_back(candidates.log_prior[i]);
        }
    if (usable.empty())
        throw Error(ErrorCode::Infeasible, "no candidate m is feasible");

    const EvidenceTable evidence(table, usable.back());
    std::vector<ModelEvidence> per_m;
    std::size_t m_star = usable.front();
    double best = kNegInf;
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const double ev = evidence.log_data_given_m(usable[i], prior);
        const double pen = penalty.log_penalty(T, usable[i]);
        const double joint = priors[i] + ev + pen;
        per_m.push_back({usable[i], priors[i], ev, pen, joint});
        if (joint > best) {
            best = joint;
            m_star = usable[i];
        }
    }

    auto map = map_segmentation(table, m_star, prior);
    auto ranked = rank_changepoints(table, map.tau);
    std::vector<SegmentSummary> segments;
    const auto b = map.tau.boundaries();
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        const auto& p = table.params(b[j], b[j + 1] - 1);
        segments.push_back({b[j], b[j + 1] - 1, p.mu, p.sigma});
    }
    return {m_star,          std::move(map.tau),  map.log_score, std::move(per_m),
            std::move(ranked), std::move(segments)};
}

} // namespace tetra
