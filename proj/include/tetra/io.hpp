#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/core.hpp"

namespace tetra {

enum class SeriesFormat { Indexed, Dated };

SeriesFormat parse_series_format(std::string_view text);

// Splits one CSV record; double quotes may wrap fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

// ISO "YYYY-MM-DD", "M/D/YYYY", "M/D/YY", or the SQF "MMDDYYYY" form (leading
// zero optional). Two-digit years below 70 are read as 20xx.
Date parse_lenient_date(std::string_view text);

// `dated`: header date,value with consecutive days unless gaps are allowed, in
// which case the rows are re-indexed and a warning is appended.
// `indexed`: header t,value with t = 1..T.
// Errors: IoError, EmptyFile, ParseError(line), NonFinite(line), NonContiguousDates(line).
TimeSeries ingest_csv(const std::filesystem::path& path, SeriesFormat format,
                      DateGaps gaps = DateGaps::Reject,
                      std::vector<std::string>* warnings = nullptr);

// Per-day counts of event rows over [first day, last day], zero filled. With
// `flag_column`, the value is instead the percentage of that day's rows whose
// flag is set (Y/1/true); empty days get 0.
// Errors: IoError, EmptyFile, MissingColumn, ParseError(line).
TimeSeries aggregate_events(const std::filesystem::path& path, std::string_view date_column,
                            std::optional<std::string_view> flag_column = std::nullopt);

// date,value when dated, else t,value.
std::string series_to_csv(const TimeSeries& series);

// Reads the index column of a changepoints.csv or a one-column list of indices.
std::vector<std::size_t> read_changepoint_indices(const std::filesystem::path& path);

std::string render_plot_svg(const TimeSeries& series, const std::vector<std::size_t>& tau);
void render_plot(const TimeSeries& series, const std::vector<std::size_t>& tau,
                 const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

} // namespace tetra
