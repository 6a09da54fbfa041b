#pragma once

#include <cstddef>
#include <vector>

#include "tetra/core.hpp"
#include "tetra/estimate.hpp"
#include "tetra/model.hpp"

namespace tetra {

// Backward log-sum tables W_k(t) for k = 0..max_m: the log of the summed
// likelihood of every feasible way to split x_t..x_T into k+1 regimes.
class EvidenceTable {
public:
    EvidenceTable(const SegmentLikelihoodTable& table, std::size_t max_m);

    std::size_t max_m() const noexcept { return max_m_; }
    // -inf where no feasible completion exists.
    double log_sum(std::size_t k, std::size_t t) const { return w_[k * (T_ + 2) + t]; }
    // log P(x | m) = W_m(1) + log placement prior.
    double log_data_given_m(std::size_t m, const GapPrior& prior) const;

private:
    std::size_t T_;
    std::size_t d_;
    std::size_t max_m_;
    std::vector<double> w_;
};

// Errors: Infeasible(m) when T < (m+1)d.
double backward_sum(const SegmentLikelihoodTable& table, std::size_t m, const GapPrior& prior);

struct MapSegmentation {
    Changepoints tau;
    double log_score; // sum of segment log-likelihoods at the optimum
};

// Max-product counterpart of backward_sum, with argmax backtracking. Ties go
// to the lexicographically smallest tau. Errors: Infeasible(m).
MapSegmentation map_segmentation(const SegmentLikelihoodTable& table, std::size_t m,
                                 const GapPrior& prior);

struct RankedChangepoint {
    std::size_t index;
    double delta_score;
};

// Merge cost of each changepoint against its two neighbouring regimes,
// sorted by descending cost, ties by ascending index.
std::vector<RankedChangepoint> rank_changepoints(const SegmentLikelihoodTable& table,
                                                 const Changepoints& tau);

struct ModelEvidence {
    std::size_t m;
    double log_prior;
    double log_evidence; // log P(x | m)
    double log_penalty;
    double log_joint; // log P(m) + log P(x | m) + penalty
};

struct SegmentSummary {
    std::size_t start;
    std::size_t end;
    double mu;
    double sigma;
};

struct ChangepointResult {
    std::size_t m_star;
    Changepoints tau_star;
    double map_log_score;
    std::vector<ModelEvidence> per_m_evidence;
    std::vector<RankedChangepoint> ranked;
    std::vector<SegmentSummary> segments;
};

// m* = argmax_m log P(m) + log P(x | m) + penalty(m) over the candidates
// (ties to the smaller m), then the MAP placement for m*.
ChangepointResult select_model(const SegmentLikelihoodTable& table,
                               const CandidateSet& candidates, const GapPrior& prior,
                               const ComplexityPenalty& penalty);

} // namespace tetra
