#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tetra/core.hpp"

namespace tetra {

struct SynthSegment {
    std::size_t length;
    double mean;
    double noise_scale;
};

enum class NoiseKind { Gaussian, StudentT };

struct SynthSpec {
    std::vector<SynthSegment> segments;
    NoiseKind noise = NoiseKind::Gaussian;
    double nu = 4.0; // Student-t degrees of freedom
    std::optional<double> seasonal_amplitude;
    std::size_t seasonal_period = 7;
    std::size_t outlier_count = 0;
    double outlier_magnitude = 0.0;
    std::uint64_t seed = 0;

    // Errors: InvalidConfig for empty segments, zero lengths, negative scales.
    void validate() const;
};

struct SyntheticSeries {
    TimeSeries series;
    Changepoints truth; // spaced by the shortest spec segment
};

SyntheticSeries generate_series(const SynthSpec& spec);

// Exhaustive joint search used to check the dynamic programmes.
struct OracleModel {
    std::size_t m;
    std::size_t placements;
    double log_prior;
    double log_evidence; // logsumexp over placements - log(placements)
    double log_penalty;
    double log_joint;
    double best_score;
    std::vector<std::size_t> best_tau;
};

struct OracleResult {
    std::size_t m_star;
    std::vector<std::size_t> tau;
    double score;
    std::vector<OracleModel> per_m;
};

// Applies the configured preprocessing and candidate set, then enumerates
// every feasible placement for every candidate m.
// Errors: TooLargeForOracle when T > 60 or a candidate m exceeds 3.
OracleResult brute_force_map(const TimeSeries& series, const DetectionConfig& cfg);

// Every feasible tau vector for (T, d, m) in lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_placements(std::size_t T, std::size_t d,
                                                           std::size_t m);

struct DetectionMatch {
    std::size_t detected;
    std::size_t truth;
    std::size_t error;
};

struct EvalReport {
    std::size_t tolerance;
    std::vector<DetectionMatch> matches;
    double precision;
    double recall;
    double f1;
    double mean_abs_error;
};

// Greedy one-to-one matching, nearest pairs first, within the tolerance.
EvalReport score_detection(const std::vector<std::size_t>& detected,
                           const std::vector<std::size_t>& truth, std::size_t tolerance);

} // namespace tetra
