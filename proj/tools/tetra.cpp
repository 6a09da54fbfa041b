#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tetra/config.hpp"
#include "tetra/io.hpp"
#include "tetra/report.hpp"
#include "tetra/synth.hpp"

namespace fs = std::filesystem;
using namespace tetra;

namespace {

std::string flag_name(const std::string& key) {
    std::string out = "--" + key;
    for (char& c : out)
        if (c == '_')
            c = '-';
    return out;
}

// Registers one string-valued flag per key; only flags actually given on the
// command line override the config file.
struct KeyFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App* app, const std::vector<std::string>& keys) {
        for (const auto& key : keys)
            options[key] = app->add_option(flag_name(key), values[key], "overrides config key " + key);
    }

    KeyValues given() const {
        KeyValues kv;
        for (const auto& [key, opt] : options)
            if (opt->count() > 0)
                kv[key] = values.at(key);
        return kv;
    }
};

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tetra: offline detection of policy changes in a time series"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "run changepoint detection on a CSV series");
    std::string detect_input, detect_format = "dated", detect_config, detect_out = "tetra_out";
    bool allow_gaps = false;
    detect_cmd->add_option("-i,--input", detect_input, "series CSV (date,value or t,value)")->required();
    detect_cmd->add_option("--format", detect_format, "dated | indexed")->check(CLI::IsMember({"dated", "indexed"}));
    detect_cmd->add_option("-c,--config", detect_config, "key=value config file");
    detect_cmd->add_option("-o,--out", detect_out, "output directory");
    detect_cmd->add_flag("--allow-gaps", allow_gaps, "accept missing days and re-index");
    KeyFlags detect_flags;
    detect_flags.add(detect_cmd, detection_config_keys());

    // aggregate
    auto* agg_cmd = app.add_subcommand("aggregate", "count event rows per day");
    std::string agg_input, agg_date_col = "datestop", agg_flag_col, agg_output;
    agg_cmd->add_option("-i,--input", agg_input, "event CSV, one row per event")->required();
    agg_cmd->add_option("--date-column", agg_date_col, "name of the date column");
    agg_cmd->add_option("--flag-column", agg_flag_col,
                        "emit the daily percentage of rows with this flag set instead of counts");
    agg_cmd->add_option("-o,--output", agg_output, "output CSV (default stdout)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic series with known changepoints");
    std::string synth_config, synth_output, synth_truth, synth_start;
    synth_cmd->add_option("-c,--config", synth_config, "synthetic spec file (key=value)");
    synth_cmd->add_option("-o,--output", synth_output, "series CSV (default stdout)");
    synth_cmd->add_option("--truth", synth_truth, "write true changepoint indices here");
    synth_cmd->add_option("--start-date", synth_start, "emit date,value starting at this ISO date");
    KeyFlags synth_flags;
    synth_flags.add(synth_cmd, {"segments", "noise", "nu", "seasonal_amplitude", "seasonal_period",
                                "outlier_count", "outlier_magnitude", "seed"});

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score detected changepoints against ground truth");
    std::string eval_detected, eval_truth;
    std::size_t eval_tol = 2;
    eval_cmd->add_option("--detected", eval_detected, "changepoints.csv from detect")->required();
    eval_cmd->add_option("--truth", eval_truth, "true changepoint indices")->required();
    eval_cmd->add_option("--tolerance", eval_tol, "match window in samples");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a series and changepoints as SVG");
    std::string plot_input, plot_format = "dated", plot_cps, plot_output = "plot.svg";
    plot_cmd->add_option("-i,--input", plot_input, "series CSV")->required();
    plot_cmd->add_option("--format", plot_format, "dated | indexed")->check(CLI::IsMember({"dated", "indexed"}));
    plot_cmd->add_option("--changepoints", plot_cps, "changepoints.csv");
    plot_cmd->add_option("-o,--output", plot_output, "SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*detect_cmd) {
            DetectionConfig cfg;
            if (!detect_config.empty())
                apply_detection_config(load_key_values(detect_config), cfg);
            apply_detection_config(detect_flags.given(), cfg);
            cfg.validate();
            std::vector<std::string> warnings;
            const auto series = ingest_csv(detect_input, parse_series_format(detect_format),
                                           allow_gaps ? DateGaps::Allow : DateGaps::Reject, &warnings);
            for (const auto& w : warnings)
                std::cerr << "warning: " << w << '\n';
            const auto report = run_detect(series, cfg, detect_out, warnings);
            std::cout << "m_hat=" << report["m_hat"].get<std::size_t>()
                      << " m_star=" << report["m_star"].get<std::size_t>() << '\n';
            for (const auto& c : report["changepoints"]) {
                std::cout << "  index " << c["index"].get<std::size_t>();
                if (!c["date"].is_null())
                    std::cout << " (" << c["date"].get<std::string>() << ")";
                std::cout << " rank " << c["rank"].get<std::size_t>() << '\n';
            }
            std::cout << "wrote " << (fs::path(detect_out) / "report.json").string() << '\n';
        } else if (*agg_cmd) {
            const auto series = aggregate_events(
                agg_input, agg_date_col,
                agg_flag_col.empty() ? std::nullopt : std::optional<std::string_view>(agg_flag_col));
            write_or_print(agg_output, series_to_csv(series));
        } else if (*synth_cmd) {
            SynthSpec spec;
            if (!synth_config.empty())
                apply_synth_spec(load_key_values(synth_config), spec);
            apply_synth_spec(synth_flags.given(), spec);
            auto generated = generate_series(spec);
            TimeSeries series = generated.series;
            if (!synth_start.empty()) {
                std::vector<Date> dates;
                Date d = parse_iso_date(synth_start);
                for (std::size_t i = 0; i < series.size(); ++i, d += std::chrono::days{1})
                    dates.push_back(d);
                std::vector<double> values(series.values().begin(), series.values().end());
                series = validate_series(std::move(values), std::move(dates));
            }
            write_or_print(synth_output, series_to_csv(series));
            if (!synth_truth.empty()) {
                std::string out = "index\n";
                for (std::size_t t : generated.truth.tau())
                    out += std::to_string(t) + '\n';
                write_file_atomic(synth_truth, out);
            }
        } else if (*eval_cmd) {
            const auto report = score_detection(read_changepoint_indices(eval_detected),
                                                read_changepoint_indices(eval_truth), eval_tol);
            std::cout << dump_json(eval_report_to_json(report));
        } else if (*plot_cmd) {
            const auto series = ingest_csv(plot_input, parse_series_format(plot_format), DateGaps::Allow);
            const auto tau = plot_cps.empty() ? std::vector<std::size_t>{} : read_changepoint_indices(plot_cps);
            render_plot(series, tau, plot_output);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
