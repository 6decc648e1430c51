#include "lf/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

LoadSeries LoadSeries::truncated(int days) const {
    if (days < 0 || days > num_days())
        throw Error(ErrorKind::range, "truncation to " + std::to_string(days) + " days out of range");
    LoadSeries out;
    out.start_epoch_s = start_epoch_s;
    out.values.assign(values.begin(), values.begin() + static_cast<std::size_t>(days) * kSamplesPerDay);
    return out;
}

WeatherSeries WeatherSeries::truncated(int days) const {
    const std::size_t n = static_cast<std::size_t>(days) * kSamplesPerDay;
    if (n > solar_wm2.size())
        throw Error(ErrorKind::range, "weather truncation out of range");
    WeatherSeries out;
    out.start_epoch_s = start_epoch_s;
    out.solar_wm2.assign(solar_wm2.begin(), solar_wm2.begin() + n);
    out.temp_c.assign(temp_c.begin(), temp_c.begin() + n);
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_value_or_missing(const std::string& field) {
    if (field.empty()) return missing_marker();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) return missing_marker();
    return v;
}

struct ParsedCsv {
    std::int64_t start_epoch_s = 0;          // first whole-day midnight
    std::vector<std::vector<double>> cols;   // per requested column, grid-aligned
};

// Shared parse path: reads the requested value columns, snaps rows to the
// 15-minute grid, sorts by timestamp, trims partial days.
ParsedCsv parse_csv_grid(const std::string& text, const CsvSchema& schema,
                         const std::vector<std::string>& value_cols) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::schema, "CSV is empty");
    const std::vector<std::string> header = split_line(line);

    auto col_index = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw Error(ErrorKind::schema, "CSV header is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ts_idx = col_index(schema.timestamp_col);
    std::vector<std::size_t> value_idx;
    for (const auto& name : value_cols) value_idx.push_back(col_index(name));

    std::map<std::int64_t, std::vector<double>> rows;  // epoch -> values
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() < header.size())
            throw Error(ErrorKind::schema,
                        "CSV row " + std::to_string(line_no) + " has fewer fields than the header");
        const std::int64_t t = parse_iso8601_utc(fields[ts_idx]);
        std::vector<double> vals;
        vals.reserve(value_idx.size());
        for (std::size_t idx : value_idx) vals.push_back(parse_value_or_missing(fields[idx]));
        auto [it, inserted] = rows.emplace(t, std::move(vals));
        if (!inserted)
            throw Error(ErrorKind::duplicate, "duplicate timestamp " + format_iso8601_utc(t));
    }
    if (rows.empty()) throw Error(ErrorKind::schema, "CSV has no data rows");

    for (const auto& [t, vals] : rows) {
        (void)vals;
        if ((t - rows.begin()->first) % kSlotSeconds != 0)
            throw Error(ErrorKind::granularity,
                        "timestamp " + format_iso8601_utc(t) + " is off the 15-minute grid");
    }
    if (rows.begin()->first % kSlotSeconds != 0)
        throw Error(ErrorKind::granularity, "series does not start on a 15-minute boundary");

    // Trim to whole days: first midnight at or after the first row, last
    // midnight at or before one slot past the final row.
    const std::int64_t first_t = rows.begin()->first;
    const std::int64_t last_t = rows.rbegin()->first;
    std::int64_t day0 = (first_t / 86400) * 86400;
    if (day0 < first_t) day0 += 86400;
    const std::int64_t day_end = ((last_t + kSlotSeconds) / 86400) * 86400;
    if (day_end <= day0)
        throw Error(ErrorKind::schema, "CSV does not cover a single whole day");

    const std::size_t n = static_cast<std::size_t>((day_end - day0) / kSlotSeconds);
    ParsedCsv out;
    out.start_epoch_s = day0;
    out.cols.assign(value_cols.size(), std::vector<double>(n, missing_marker()));
    for (const auto& [t, vals] : rows) {
        if (t < day0 || t >= day_end) continue;
        const std::size_t i = static_cast<std::size_t>((t - day0) / kSlotSeconds);
        for (std::size_t c = 0; c < vals.size(); ++c) out.cols[c][i] = vals[c];
    }
    return out;
}

void append_value(std::string& out, double v) {
    if (is_missing(v)) {
        out += "NaN";
        return;
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

}  // namespace

LoadSeries load_csv(const std::string& text, const CsvSchema& schema) {
    ParsedCsv parsed = parse_csv_grid(text, schema, {schema.load_col});
    LoadSeries series;
    series.start_epoch_s = parsed.start_epoch_s;
    series.values = std::move(parsed.cols[0]);
    if (schema.load_is_kwh_per_slot)
        for (double& v : series.values) v *= 4.0;
    for (double v : series.values)
        if (!is_missing(v) && (!std::isfinite(v) || v < 0.0))
            throw Error(ErrorKind::schema, "load value " + std::to_string(v) + " is negative or non-finite");
    return series;
}

WeatherSeries load_weather_csv(const std::string& text, const CsvSchema& schema) {
    ParsedCsv parsed = parse_csv_grid(text, schema, {schema.solar_col, schema.temp_col});
    WeatherSeries weather;
    weather.start_epoch_s = parsed.start_epoch_s;
    weather.solar_wm2 = std::move(parsed.cols[0]);
    weather.temp_c = std::move(parsed.cols[1]);
    for (double v : weather.solar_wm2)
        if (!is_missing(v) && v < 0.0)
            throw Error(ErrorKind::schema, "solar radiation must be non-negative");
    return weather;
}

std::string write_csv(const LoadSeries& series, const WeatherSeries* weather) {
    if (weather && weather->solar_wm2.size() != series.values.size())
        throw Error(ErrorKind::alignment, "weather series length differs from load series");
    std::string out = "timestamp,load_kw";
    if (weather) out += ",solar_wm2,temp_c";
    out += "\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out += format_iso8601_utc(series.start_epoch_s + static_cast<std::int64_t>(i) * kSlotSeconds);
        out += ',';
        append_value(out, series.values[i]);
        if (weather) {
            out += ',';
            append_value(out, weather->solar_wm2[i]);
            out += ',';
            append_value(out, weather->temp_c[i]);
        }
        out += '\n';
    }
    return out;
}

LoadSeries fill_missing(const LoadSeries& series, FillPolicy policy) {
    LoadSeries out = series;
    auto& v = out.values;
    const std::size_t n = v.size();
    if (policy == FillPolicy::linear_interpolate) {
        std::size_t i = 0;
        while (i < n) {
            if (!is_missing(v[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < n && is_missing(v[j])) ++j;
            const std::size_t gap = j - i;
            if (i == 0 || j == n || gap >= kSamplesPerDay)
                throw Error(ErrorKind::unfillable,
                            "gap of " + std::to_string(gap) + " samples at day " +
                                std::to_string(i / kSamplesPerDay) +
                                " cannot be linearly interpolated");
            const double lo = v[i - 1];
            const double hi = v[j];
            for (std::size_t k = i; k < j; ++k) {
                const double frac = static_cast<double>(k - i + 1) / static_cast<double>(gap + 1);
                v[k] = lo + (hi - lo) * frac;
            }
            i = j;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_missing(v[i])) continue;
            if (i < kSamplesPerDay)
                throw Error(ErrorKind::unfillable,
                            "missing sample at day 0 has no previous day to copy from");
            v[i] = v[i - kSamplesPerDay];  // earlier days already filled
            if (is_missing(v[i]))
                throw Error(ErrorKind::unfillable,
                            "slot " + std::to_string(i % kSamplesPerDay) + " is missing in day " +
                                std::to_string(i / kSamplesPerDay) + " and every day before it");
        }
    }
    return out;
}

DayProfile day_slice(const LoadSeries& series, int d) {
    if (d < 0 || d >= series.num_days())
        throw Error(ErrorKind::range, "day index " + std::to_string(d) + " outside 0.." +
                                          std::to_string(series.num_days() - 1));
    DayProfile profile;
    profile.day_index = d;
    const auto begin = series.values.begin() + static_cast<std::size_t>(d) * kSamplesPerDay;
    profile.values.assign(begin, begin + kSamplesPerDay);
    return profile;
}

LoadSeries aggregate_community(std::span<const LoadSeries> buildings) {
    if (buildings.empty())
        throw Error(ErrorKind::alignment, "community aggregation needs at least one series");
    LoadSeries out = buildings[0];
    for (std::size_t b = 1; b < buildings.size(); ++b) {
        const LoadSeries& s = buildings[b];
        if (s.start_epoch_s != out.start_epoch_s || s.values.size() != out.values.size())
            throw Error(ErrorKind::alignment,
                        "building " + std::to_string(b) + " is not aligned with the first series");
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += s.values[i];
    }
    for (double v : out.values)
        if (is_missing(v))
            throw Error(ErrorKind::alignment, "community aggregation requires gap-free series");
    return out;
}

}  // namespace lf
