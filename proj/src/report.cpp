#include "tetra/report.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <openssl/evp.h>

#include "tetra/io.hpp"

namespace tetra {

namespace fs = std::filesystem;

double round_sig9(double v) {
    if (!std::isfinite(v) || v == 0.0)
        return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::IoError, "sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string series_digest(const TimeSeries& series) {
    std::string bytes;
    bytes.reserve(series.size() * 12);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(series[i]);
        for (int b = 0; b < 8; ++b)
            bytes += static_cast<char>((bits >> (8 * b)) & 0xFF);
        if (series.has_dates()) {
            const auto days = static_cast<std::int32_t>(series.dates()[i].time_since_epoch().count());
            for (int b = 0; b < 4; ++b)
                bytes += static_cast<char>((static_cast<std::uint32_t>(days) >> (8 * b)) & 0xFF);
        }
    }
    return "sha256:" + sha256_hex(bytes);
}

Json config_to_json(const DetectionConfig& cfg, std::size_t effective_m_max) {
    Json j;
    j["d"] = cfg.d;
    j["alpha"] = round_sig9(cfg.alpha);
    j["beta"] = round_sig9(cfg.beta);
    j["m_hat_override"] = cfg.m_hat_override ? Json(*cfg.m_hat_override) : Json(nullptr);
    j["model"] = std::string(to_string(cfg.model.kind));
    j["nu"] = round_sig9(cfg.model.nu);
    j["em_tol"] = round_sig9(cfg.model.em_tol);
    j["em_max_iter"] = cfg.model.em_max_iter;
    j["sigma_floor"] = round_sig9(cfg.model.sigma_floor);
    j["gap_prior"] = std::string(to_string(cfg.gap_prior.kind));
    j["complexity_penalty"] = std::string(to_string(cfg.penalty.kind));
    j["penalty_params"] = round_sig9(cfg.penalty.params_per_segment);
    j["outlier_enabled"] = cfg.outliers.enabled;
    j["outlier_window"] = cfg.outliers.window;
    j["outlier_threshold"] = round_sig9(cfg.outliers.threshold);
    j["scale_enabled"] = cfg.scale.enabled;
    j["smooth_enabled"] = cfg.smooth.enabled;
    j["smooth_window"] = cfg.smooth.window;
    j["smooth_degree"] = cfg.smooth.degree;
    j["m_max"] = effective_m_max;
    j["cusum_prominence"] = round_sig9(cfg.cusum_prominence);
    return j;
}

namespace {

Json date_or_null(const TimeSeries& series, std::size_t t) {
    const auto d = series.date_at(t);
    return d ? Json(format_iso_date(*d)) : Json(nullptr);
}

} // namespace

Json build_report(const TimeSeries& input, const DetectionConfig& cfg, const Detection& det,
                  const std::vector<std::string>& warnings) {
    const auto& res = det.result;
    Json j;
    j["tool"] = "tetra";
    j["version"] = std::string(kToolVersion);

    Json in;
    in["length"] = input.size();
    in["digest"] = series_digest(input);
    in["first_date"] = date_or_null(input, 1);
    in["last_date"] = date_or_null(input, input.size());
    j["input"] = std::move(in);
    j["config"] = config_to_json(cfg, det.m_max);

    Json pre;
    Json replaced = Json::array();
    for (const auto& r : det.trace.replaced_outliers) {
        Json e;
        e["offset"] = r.offset;
        e["date"] = date_or_null(input, r.offset + 1);
        e["original"] = round_sig9(r.original);
        e["replacement"] = round_sig9(r.replacement);
        replaced.push_back(std::move(e));
    }
    pre["replaced_outliers"] = std::move(replaced);
    pre["scaled"] = det.trace.scaled;
    pre["scale_min"] = round_sig9(det.trace.scale_min);
    pre["scale_max"] = round_sig9(det.trace.scale_max);
    pre["smoothed"] = det.trace.smoothed;
    pre["smooth_window"] = det.trace.smooth_window;
    pre["smooth_degree"] = det.trace.smooth_degree;
    j["preprocess"] = std::move(pre);

    j["m_hat"] = det.m_hat;
    j["m_hat_source"] = det.m_hat_overridden ? "override" : "cusum";
    Json cands = Json::array();
    for (const auto& e : res.per_m_evidence) {
        Json c;
        c["m"] = e.m;
        c["log_prior"] = round_sig9(e.log_prior);
        c["log_evidence"] = round_sig9(e.log_evidence);
        c["log_penalty"] = round_sig9(e.log_penalty);
        c["log_joint"] = round_sig9(e.log_joint);
        cands.push_back(std::move(c));
    }
    j["candidates"] = std::move(cands);
    j["m_star"] = res.m_star;
    j["map_log_score"] = round_sig9(res.map_log_score);

    Json cps = Json::array();
    for (std::size_t t : res.tau_star.tau()) {
        std::size_t rank = 0;
        double delta = 0.0;
        for (std::size_t r = 0; r < res.ranked.size(); ++r)
            if (res.ranked[r].index == t) {
                rank = r + 1;
                delta = res.ranked[r].delta_score;
            }
        Json c;
        c["index"] = t;
        c["date"] = date_or_null(input, t);
        c["delta_score"] = round_sig9(delta);
        c["rank"] = rank;
        cps.push_back(std::move(c));
    }
    j["changepoints"] = std::move(cps);

    Json segs = Json::array();
    for (std::size_t k = 0; k < res.segments.size(); ++k) {
        const auto& s = res.segments[k];
        Json e;
        e["start"] = s.start;
        e["end"] = s.end;
        e["start_date"] = date_or_null(input, s.start);
        e["end_date"] = date_or_null(input, s.end);
        e["mu"] = round_sig9(s.mu);
        e["sigma"] = round_sig9(s.sigma);
        e["raw_mean"] = round_sig9(det.raw_segment_means[k]);
        segs.push_back(std::move(e));
    }
    j["segments"] = std::move(segs);
    j["warnings"] = warnings;
    return j;
}

std::string changepoints_csv(const TimeSeries& input, const Detection& det) {
    std::string out = "rank,index,date,delta_score\n";
    for (std::size_t r = 0; r < det.result.ranked.size(); ++r) {
        const auto& c = det.result.ranked[r];
        const auto date = input.date_at(c.index);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", c.delta_score);
        out += std::to_string(r + 1) + ',' + std::to_string(c.index) + ',' +
               (date ? format_iso_date(*date) : std::string()) + ',' + buf + '\n';
    }
    return out;
}

Json eval_report_to_json(const EvalReport& report) {
    Json j;
    j["tolerance"] = report.tolerance;
    Json matches = Json::array();
    for (const auto& m : report.matches)
        matches.push_back(Json{{"detected", m.detected}, {"truth", m.truth}, {"error", m.error}});
    j["matches"] = std::move(matches);
    j["precision"] = round_sig9(report.precision);
    j["recall"] = round_sig9(report.recall);
    j["f1"] = round_sig9(report.f1);
    j["mean_abs_error"] = round_sig9(report.mean_abs_error);
    return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json run_detect(const TimeSeries& input, const DetectionConfig& cfg, const fs::path& out_dir,
                const std::vector<std::string>& warnings) {
    const Detection det = detect(input, cfg);
    Json report = build_report(input, cfg, det, warnings);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    write_file_atomic(out_dir / "report.json", dump_json(report));
    write_file_atomic(out_dir / "changepoints.csv", changepoints_csv(input, det));
    render_plot(input, det.result.tau_star.tau(), out_dir / "plot.svg");
    return report;
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::BadWindow:
        return 1;
    case ErrorCode::ParseError:
    case ErrorCode::NonFinite:
    case ErrorCode::NonMonotonicTimestamps:
    case ErrorCode::NonContiguousDates:
    case ErrorCode::LengthMismatch:
    case ErrorCode::EmptyFile:
    case ErrorCode::MissingColumn:
        return 2;
    case ErrorCode::Infeasible:
    case ErrorCode::NoFeasibleM:
    case ErrorCode::SeriesTooShort:
    case ErrorCode::SegmentTooShort:
        return 3;
    default:
        return 4;
    }
}

} // namespace tetra
