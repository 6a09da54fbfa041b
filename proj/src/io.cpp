#include "tetra/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tetra {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
    }
    if (!lines.empty() && lines.front().rfind("\xEF\xBB\xBF", 0) == 0)
        lines.front().erase(0, 3);
    while (!lines.empty() && trim(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        throw Error(ErrorCode::EmptyFile, path.string() + " is empty");
    return lines;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::optional<Date> make_date(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1 || d > 31)
        return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return std::nullopt;
    return Date{ymd};
}

int widen_year(int y, std::size_t digits) {
    if (digits > 2)
        return y;
    return y < 70 ? 2000 + y : 1900 + y;
}

std::optional<Date> try_lenient_date(std::string_view text) {
    text = trim(text);
    if (const auto space = text.find_first_of(" T"); space != std::string_view::npos && space >= 6)
        text = text.substr(0, space);
    if (text.empty())
        return std::nullopt;

    const char sep = text.find('-') != std::string_view::npos ? '-'
                     : text.find('/') != std::string_view::npos ? '/'
                                                                 : '\0';
    if (sep != '\0') {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        while (true) {
            const auto at = text.find(sep, start);
            parts.push_back(text.substr(start, at - start));
            if (at == std::string_view::npos)
                break;
            start = at + 1;
        }
        if (parts.size() != 3)
            return std::nullopt;
        const auto a = parse_int(parts[0]);
        const auto b = parse_int(parts[1]);
        const auto c = parse_int(parts[2]);
        if (!a || !b || !c)
            return std::nullopt;
        if (sep == '-' && parts[0].size() == 4)
            return make_date(*a, *b, *c);
        return make_date(widen_year(*c, parts[2].size()), *a, *b);
    }

    if (!std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return std::nullopt;
    // SQF style month-day-year with the month's leading zero often dropped.
    std::size_t year_digits = 0;
    if (text.size() == 7 || text.size() == 8)
        year_digits = 4;
    else if (text.size() == 5 || text.size() == 6)
        year_digits = 2;
    else
        return std::nullopt;
    const auto y = parse_int(text.substr(text.size() - year_digits));
    const auto d = parse_int(text.substr(text.size() - year_digits - 2, 2));
    const auto m = parse_int(text.substr(0, text.size() - year_digits - 2));
    if (!y || !d || !m)
        return std::nullopt;
    return make_date(widen_year(*y, year_digits), *m, *d);
}

double parse_value(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw Error(ErrorCode::ParseError, "bad value '" + std::string(field) + "'",
                    static_cast<std::int64_t>(line_no));
    if (!std::isfinite(v))
        throw Error(ErrorCode::NonFinite, "value is not finite", static_cast<std::int64_t>(line_no));
    return v;
}

void expect_header(const std::string& line, std::string_view first, const fs::path& path) {
    const auto cols = split_csv_line(line);
    if (cols.size() != 2 || lower(trim(cols[0])) != first || lower(trim(cols[1])) != "value")
        throw Error(ErrorCode::ParseError,
                    path.string() + ": expected header '" + std::string(first) + ",value'", 1);
}

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

SeriesFormat parse_series_format(std::string_view text) {
    if (text == "dated")
        return SeriesFormat::Dated;
    if (text == "indexed")
        return SeriesFormat::Indexed;
    throw Error(ErrorCode::InvalidConfig, "unknown series format '" + std::string(text) + "'");
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

Date parse_lenient_date(std::string_view text) {
    if (auto d = try_lenient_date(text))
        return *d;
    throw Error(ErrorCode::ParseError, "unrecognised date '" + std::string(text) + "'");
}

TimeSeries ingest_csv(const fs::path& path, SeriesFormat format, DateGaps gaps,
                      std::vector<std::string>* warnings) {
    const auto lines = read_lines(path);
    expect_header(lines[0], format == SeriesFormat::Dated ? "date" : "t", path);

    std::vector<double> values;
    std::vector<Date> dates;
    std::size_t gap_count = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty())
            continue;
        const auto cols = split_csv_line(lines[i]);
        if (cols.size() != 2)
            throw Error(ErrorCode::ParseError, "expected 2 fields", static_cast<std::int64_t>(line_no));
        if (format == SeriesFormat::Indexed) {
            const auto t = parse_int(trim(cols[0]));
            if (!t || *t != static_cast<int>(values.size() + 1))
                throw Error(ErrorCode::ParseError, "index must run 1..T",
                            static_cast<std::int64_t>(line_no));
        } else {
            Date date;
            try {
                date = parse_iso_date(trim(cols[0]));
            } catch (const Error&) {
                throw Error(ErrorCode::ParseError, "bad date '" + cols[0] + "'",
                            static_cast<std::int64_t>(line_no));
            }
            if (!dates.empty()) {
                const auto step = (date - dates.back()).count();
                if (step <= 0)
                    throw Error(ErrorCode::NonMonotonicTimestamps, "dates must increase",
                                static_cast<std::int64_t>(line_no));
                if (step != 1) {
                    if (gaps == DateGaps::Reject)
                        throw Error(ErrorCode::NonContiguousDates,
                                    "missing days before " + format_iso_date(date),
                                    static_cast<std::int64_t>(line_no));
                    ++gap_count;
                }
            }
            dates.push_back(date);
        }
        values.push_back(parse_value(cols[1], line_no));
    }
    if (values.empty())
        throw Error(ErrorCode::EmptyFile, path.string() + " has no data rows");
    if (gap_count > 0 && warnings)
        warnings->push_back("dates have " + std::to_string(gap_count) +
                            " gap(s); rows re-indexed as consecutive samples");
    if (format == SeriesFormat::Dated)
        return validate_series(std::move(values), std::move(dates), gaps);
    return validate_series(std::move(values));
}

TimeSeries aggregate_events(const fs::path& path, std::string_view date_column,
                            std::optional<std::string_view> flag_column) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    auto find_col = [&](std::string_view name) {
        const std::string want = lower(trim(name));
        for (std::size_t i = 0; i < header.size(); ++i)
            if (lower(trim(header[i])) == want)
                return i;
        throw Error(ErrorCode::MissingColumn, "no column '" + std::string(name) + "'");
    };
    const std::size_t date_idx = find_col(date_column);
    const bool has_flag = flag_column.has_value();
    const std::size_t flag_idx = has_flag ? find_col(*flag_column) : 0;

    std::map<Date, std::pair<std::size_t, std::size_t>> days; // rows, flagged rows
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto cols = split_csv_line(lines[i]);
        const std::size_t need = std::max(date_idx, flag_idx);
        if (cols.size() <= need)
            throw Error(ErrorCode::ParseError, "too few fields", static_cast<std::int64_t>(line_no));
        const auto date = try_lenient_date(cols[date_idx]);
        if (!date)
            throw Error(ErrorCode::ParseError, "bad date '" + cols[date_idx] + "'",
                        static_cast<std::int64_t>(line_no));
        auto& day = days[*date];
        ++day.first;
        if (has_flag) {
            const std::string flag = lower(trim(cols[flag_idx]));
            if (flag == "y" || flag == "1" || flag == "true" || flag == "yes")
                ++day.second;
        }
    }
    if (days.empty())
        throw Error(ErrorCode::EmptyFile, path.string() + " has no event rows");

    const Date first = days.begin()->first;
    const Date last = days.rbegin()->first;
    std::vector<double> values;
    std::vector<Date> dates;
    for (Date d = first; d <= last; d += std::chrono::days{1}) {
        const auto it = days.find(d);
        double v = 0.0;
        if (it != days.end())
            v = has_flag ? 100.0 * static_cast<double>(it->second.second) /
                               static_cast<double>(it->second.first)
                         : static_cast<double>(it->second.first);
        values.push_back(v);
        dates.push_back(d);
    }
    return validate_series(std::move(values), std::move(dates));
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = series.has_dates() ? "date,value\n" : "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += series.has_dates() ? format_iso_date(series.dates()[i]) : std::to_string(i + 1);
        out += ',' + fmt(series[i], "%.17g") + '\n';
    }
    return out;
}

std::vector<std::size_t> read_changepoint_indices(const fs::path& path) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    std::size_t col = 0;
    bool has_header = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto name = lower(trim(header[i]));
        if (name == "index" || name == "tau") {
            col = i;
            has_header = true;
        }
    }
    if (!has_header && header.size() == 1 && !parse_int(trim(header[0])))
        has_header = true;
    std::vector<std::size_t> out;
    for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
        const auto cols = split_csv_line(lines[i]);
        const auto v = cols.size() > col ? parse_int(trim(cols[col])) : std::nullopt;
        if (!v || *v < 1)
            throw Error(ErrorCode::ParseError, "bad changepoint index",
                        static_cast<std::int64_t>(i + 1));
        out.push_back(static_cast<std::size_t>(*v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string render_plot_svg(const TimeSeries& series, const std::vector<std::size_t>& tau) {
    constexpr double width = 960.0, height = 360.0;
    constexpr double left = 64.0, right = 16.0, top = 16.0, bottom = 48.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const auto x = series.values();
    const std::size_t T = x.size();
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it;
    const double span = *hi_it > lo ? *hi_it - lo : 1.0;
    auto px = [&](double t) { return left + (T > 1 ? (t - 1.0) / static_cast<double>(T - 1) : 0.5) * plot_w; };
    auto py = [&](double v) { return top + plot_h - (v - lo) / span * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "<path class=\"axis\" d=\"M " << left << ' ' << top << " V " << top + plot_h << " H "
        << left + plot_w << "\" stroke=\"black\" fill=\"none\"/>\n";

    // Five ticks along the time axis, labelled by date when available.
    for (int k = 0; k < 5; ++k) {
        const std::size_t t = 1 + static_cast<std::size_t>(std::llround(k * static_cast<double>(T - 1) / 4.0));
        const std::string label =
            series.has_dates() ? format_iso_date(series.dates()[t - 1]) : std::to_string(t);
        svg << "<text x=\"" << fmt(px(static_cast<double>(t)), "%.2f") << "\" y=\""
            << fmt(top + plot_h + 20.0, "%.2f")
            << "\" font-size=\"11\" text-anchor=\"middle\">" << label << "</text>\n";
    }
    svg << "<text x=\"" << fmt(left - 6.0, "%.2f") << "\" y=\"" << fmt(top + 10.0, "%.2f")
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(*hi_it, "%.4g") << "</text>\n"
        << "<text x=\"" << fmt(left - 6.0, "%.2f") << "\" y=\"" << fmt(top + plot_h, "%.2f")
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(lo, "%.4g") << "</text>\n";

    svg << "<polyline class=\"series\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < T; ++i) {
        if (i > 0)
            svg << ' ';
        svg << fmt(px(static_cast<double>(i + 1)), "%.2f") << ',' << fmt(py(x[i]), "%.2f");
    }
    svg << "\"/>\n";
    for (std::size_t t : tau) {
        const std::string cx = fmt(px(static_cast<double>(t) - 0.5), "%.2f");
        svg << "<line class=\"changepoint\" x1=\"" << cx << "\" y1=\"" << top << "\" x2=\"" << cx
            << "\" y2=\"" << top + plot_h << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_plot(const TimeSeries& series, const std::vector<std::size_t>& tau,
                 const fs::path& path) {
    write_file_atomic(path, render_plot_svg(series, tau));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace tetra
