#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/core.hpp"
#include "tetra/synth.hpp"

namespace tetra {

// Ordered key=value pairs. Blank lines and '#' comments are ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

// Keys understood by apply_detection_config, in DetectionConfig order.
const std::vector<std::string>& detection_config_keys();

// Errors: InvalidConfig for unknown keys or unparsable values.
void apply_detection_config(const KeyValues& kv, DetectionConfig& cfg);

// Synthetic specs use `segments = len:mean:scale, len:mean:scale, ...` plus
// noise, nu, seasonal_amplitude, seasonal_period, outlier_count,
// outlier_magnitude and seed.
void apply_synth_spec(const KeyValues& kv, SynthSpec& spec);
std::string synth_spec_to_text(const SynthSpec& spec);

} // namespace tetra
