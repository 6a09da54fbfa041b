#include "tetra/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "tetra/io.hpp"

namespace tetra {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw Error(ErrorCode::InvalidConfig, "bad value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
        bad_value(key, value);
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
        bad_value(key, value);
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    bad_value(key, value);
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto at = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, at - start)));
        if (at == std::string_view::npos)
            break;
        start = at + 1;
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty())
                throw Error(ErrorCode::ParseError, "expected key = value",
                            static_cast<std::int64_t>(line_no));
            kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
        }
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    return parse_key_values(read_file(path));
}

const std::vector<std::string>& detection_config_keys() {
    static const std::vector<std::string> keys = {
        "d",
        "alpha",
        "beta",
        "m_hat_override",
        "model",
        "nu",
        "em_tol",
        "em_max_iter",
        "sigma_floor",
        "gap_prior",
        "complexity_penalty",
        "penalty_params",
        "outlier_enabled",
        "outlier_window",
        "outlier_threshold",
        "scale_enabled",
        "smooth_enabled",
        "smooth_window",
        "smooth_degree",
        "m_max",
        "cusum_prominence",
    };
    return keys;
}

void apply_detection_config(const KeyValues& kv, DetectionConfig& cfg) {
    for (const auto& [key, value] : kv) {
        if (key == "d")
            cfg.d = to_uint(key, value);
        else if (key == "alpha")
            cfg.alpha = to_double(key, value);
        else if (key == "beta")
            cfg.beta = to_double(key, value);
        else if (key == "m_hat_override") {
            if (value == "none" || value == "auto" || value.empty())
                cfg.m_hat_override.reset();
            else
                cfg.m_hat_override = to_uint(key, value);
        } else if (key == "model")
            cfg.model.kind = parse_model_kind(value);
        else if (key == "nu")
            cfg.model.nu = to_double(key, value);
        else if (key == "em_tol")
            cfg.model.em_tol = to_double(key, value);
        else if (key == "em_max_iter")
            cfg.model.em_max_iter = static_cast<int>(to_uint(key, value));
        else if (key == "sigma_floor")
            cfg.model.sigma_floor = to_double(key, value);
        else if (key == "gap_prior")
            cfg.gap_prior.kind = parse_gap_prior_kind(value);
        else if (key == "complexity_penalty")
            cfg.penalty.kind = parse_penalty_kind(value);
        else if (key == "penalty_params")
            cfg.penalty.params_per_segment = to_double(key, value);
        else if (key == "outlier_enabled")
            cfg.outliers.enabled = to_bool(key, value);
        else if (key == "outlier_window")
            cfg.outliers.window = to_uint(key, value);
        else if (key == "outlier_threshold")
            cfg.outliers.threshold = to_double(key, value);
        else if (key == "scale_enabled")
            cfg.scale.enabled = to_bool(key, value);
        else if (key == "smooth_enabled")
            cfg.smooth.enabled = to_bool(key, value);
        else if (key == "smooth_window")
            cfg.smooth.window = to_uint(key, value);
        else if (key == "smooth_degree")
            cfg.smooth.degree = to_uint(key, value);
        else if (key == "m_max") {
            if (value == "none" || value == "auto" || value.empty())
                cfg.m_max.reset();
            else
                cfg.m_max = to_uint(key, value);
        } else if (key == "cusum_prominence")
            cfg.cusum_prominence = to_double(key, value);
        else
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
}

void apply_synth_spec(const KeyValues& kv, SynthSpec& spec) {
    for (const auto& [key, value] : kv) {
        if (key == "segments") {
            spec.segments.clear();
            for (const auto& item : split(value, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 3)
                    bad_value(key, item);
                spec.segments.push_back({to_uint(key, parts[0]), to_double(key, parts[1]),
                                         to_double(key, parts[2])});
            }
        } else if (key == "noise") {
            if (value == "gaussian")
                spec.noise = NoiseKind::Gaussian;
            else if (value == "student_t")
                spec.noise = NoiseKind::StudentT;
            else
                bad_value(key, value);
        } else if (key == "nu")
            spec.nu = to_double(key, value);
        else if (key == "seasonal_amplitude") {
            if (value == "none" || value.empty())
                spec.seasonal_amplitude.reset();
            else
                spec.seasonal_amplitude = to_double(key, value);
        } else if (key == "seasonal_period")
            spec.seasonal_period = to_uint(key, value);
        else if (key == "outlier_count")
            spec.outlier_count = to_uint(key, value);
        else if (key == "outlier_magnitude")
            spec.outlier_magnitude = to_double(key, value);
        else if (key == "seed")
            spec.seed = to_uint(key, value);
        else
            throw Error(ErrorCode::InvalidConfig, "unknown synth key '" + key + "'");
    }
}

std::string synth_spec_to_text(const SynthSpec& spec) {
    std::string segs;
    for (const auto& s : spec.segments) {
        if (!segs.empty())
            segs += ", ";
        segs += std::to_string(s.length) + ':' + num(s.mean) + ':' + num(s.noise_scale);
    }
    std::string out;
    out += "segments = " + segs + '\n';
    out += std::string("noise = ") + (spec.noise == NoiseKind::Gaussian ? "gaussian" : "student_t") + '\n';
    out += "nu = " + num(spec.nu) + '\n';
    out += "seasonal_amplitude = " + (spec.seasonal_amplitude ? num(*spec.seasonal_amplitude) : std::string("none")) + '\n';
    out += "seasonal_period = " + std::to_string(spec.seasonal_period) + '\n';
    out += "outlier_count = " + std::to_string(spec.outlier_count) + '\n';
    out += "outlier_magnitude = " + num(spec.outlier_magnitude) + '\n';
    out += "seed = " + std::to_string(spec.seed) + '\n';
    return out;
}

} // namespace tetra
