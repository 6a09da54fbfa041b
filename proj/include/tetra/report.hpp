#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tetra/core.hpp"
#include "tetra/pipeline.hpp"
#include "tetra/synth.hpp"

namespace tetra {

inline constexpr std::string_view kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

// Rounds to 9 significant digits so serialised reports diff cleanly.
double round_sig9(double v);

std::string sha256_hex(std::string_view bytes);
// Digest over the raw value bit patterns and dates of an ingested series.
std::string series_digest(const TimeSeries& series);

Json config_to_json(const DetectionConfig& cfg, std::size_t effective_m_max);
Json build_report(const TimeSeries& input, const DetectionConfig& cfg, const Detection& det,
                  const std::vector<std::string>& warnings = {});
std::string changepoints_csv(const TimeSeries& input, const Detection& det);
Json eval_report_to_json(const EvalReport& report);

// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json& j);

// Runs the detection pipeline and writes report.json, changepoints.csv and
// plot.svg into out_dir (created if needed). Returns the report.
Json run_detect(const TimeSeries& input, const DetectionConfig& cfg,
                const std::filesystem::path& out_dir,
                const std::vector<std::string>& warnings = {});

// 1 usage, 2 parse, 3 infeasible, 4 internal.
int exit_code_for(ErrorCode code) noexcept;

} // namespace tetra
