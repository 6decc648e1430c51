#include "lf/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

namespace {

// Shortest decimal form that parses back to the same double, so CSV and
// manifest values round-trip bit-exactly.
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Fixed two decimals for SVG coordinates: compact and deterministic.
std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

class OracleModel final : public ForecastModel {
public:
    explicit OracleModel(LoadSeries full) : full_(std::move(full)) {}

    std::string id() const override { return "oracle"; }
    bool needs_fit() const override { return false; }
    void fit(const LoadSeries&, const WeatherSeries*) override {}

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        const std::int64_t offset_s = window.start_epoch_s - full_.start_epoch_s;
        if (offset_s % 86400 != 0)
            throw Error(ErrorKind::alignment, "oracle window is not midnight-aligned with its data");
        const int target = static_cast<int>(offset_s / 86400) + window.num_days();
        if (offset_s < 0 || target >= full_.num_days())
            throw Error(ErrorKind::range, "oracle has no data for day " + std::to_string(target));
        DayForecast f;
        f.model_id = "oracle";
        f.origin_day = target - 1;
        f.target_day = target;
        f.values = day_slice(full_, target).values;
        return f;
    }

private:
    LoadSeries full_;
};

void check_cv_preconditions(const std::vector<std::unique_ptr<ForecastModel>>& models,
                            const LoadSeries& data, const WeatherSeries* weather,
                            const RollingCvConfig& config) {
    if (models.empty()) throw Error(ErrorKind::validation, "rolling_cv needs at least one model");
    for (const auto& m : models)
        if (!m) throw Error(ErrorKind::validation, "rolling_cv received a null model");
    if (config.train_days < 1)
        throw Error(ErrorKind::validation, "train_days must be at least 1");
    if (config.refit_every < 1)
        throw Error(ErrorKind::validation, "refit_every must be at least 1");
    if (config.eval_begin < config.train_days)
        throw Error(ErrorKind::validation,
                    "evaluation must start at or after day train_days so a full training window "
                    "precedes every forecast");
    if (config.eval_end <= config.eval_begin)
        throw Error(ErrorKind::validation, "the evaluation range is empty");
    if (data.num_days() < config.eval_end)
        throw Error(ErrorKind::coverage,
                    "data covers " + std::to_string(data.num_days()) +
                        " days but evaluation ends at day " + std::to_string(config.eval_end));
    if (weather != nullptr) {
        if (weather->start_epoch_s != data.start_epoch_s)
            throw Error(ErrorKind::alignment, "weather series does not start with the load series");
        const std::size_t need = static_cast<std::size_t>(config.eval_end) * kSamplesPerDay;
        if (weather->solar_wm2.size() < need || weather->temp_c.size() < need)
            throw Error(ErrorKind::coverage, "weather series does not cover the evaluation range");
    }
}

}  // namespace

double rmse(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size())
        throw Error(ErrorKind::shape, "rmse needs vectors of equal length, got " +
                                          std::to_string(forecast.size()) + " and " +
                                          std::to_string(actual.size()));
    if (forecast.empty()) throw Error(ErrorKind::shape, "rmse of empty vectors is undefined");
    double se = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        if (!std::isfinite(forecast[i]) || !std::isfinite(actual[i]))
            throw Error(ErrorKind::input, "rmse inputs must be finite");
        const double diff = forecast[i] - actual[i];
        se += diff * diff;
    }
    return std::sqrt(se / static_cast<double>(forecast.size()));
}

std::unique_ptr<ForecastModel> make_oracle_model(LoadSeries full_data) {
    return std::make_unique<OracleModel>(std::move(full_data));
}

LoadSeries slice_days(const LoadSeries& series, int first_day, int last_day) {
    if (first_day < 0 || last_day <= first_day || last_day > series.num_days())
        throw Error(ErrorKind::range, "day slice [" + std::to_string(first_day) + ", " +
                                          std::to_string(last_day) + ") is outside the series");
    LoadSeries out;
    out.start_epoch_s = series.start_epoch_s + static_cast<std::int64_t>(first_day) * 86400;
    out.values.assign(series.values.begin() + first_day * kSamplesPerDay,
                      series.values.begin() + last_day * kSamplesPerDay);
    return out;
}

WeatherSeries slice_days(const WeatherSeries& weather, int first_day, int last_day) {
    const int days = static_cast<int>(weather.solar_wm2.size()) / kSamplesPerDay;
    if (first_day < 0 || last_day <= first_day || last_day > days)
        throw Error(ErrorKind::range, "day slice [" + std::to_string(first_day) + ", " +
                                          std::to_string(last_day) + ") is outside the weather");
    WeatherSeries out;
    out.start_epoch_s = weather.start_epoch_s + static_cast<std::int64_t>(first_day) * 86400;
    out.solar_wm2.assign(weather.solar_wm2.begin() + first_day * kSamplesPerDay,
                         weather.solar_wm2.begin() + last_day * kSamplesPerDay);
    out.temp_c.assign(weather.temp_c.begin() + first_day * kSamplesPerDay,
                      weather.temp_c.begin() + last_day * kSamplesPerDay);
    return out;
}

std::vector<EvalReport> rolling_cv(const std::vector<std::unique_ptr<ForecastModel>>& models,
                                   const LoadSeries& data, const WeatherSeries* weather,
                                   const RollingCvConfig& config) {
    check_cv_preconditions(models, data, weather, config);

    double load_sum = 0.0;
    for (int i = config.eval_begin * kSamplesPerDay; i < config.eval_end * kSamplesPerDay; ++i) {
        if (is_missing(data.values[i]))
            throw Error(ErrorKind::input,
                        "the evaluation range contains missing samples; fill them first");
        load_sum += data.values[i];
    }
    const double mean_load =
        load_sum / (static_cast<double>(config.eval_end - config.eval_begin) * kSamplesPerDay);
    if (mean_load <= 0.0)
        throw Error(ErrorKind::domain, "mean load over the evaluation range must be positive");

    std::map<std::string, std::string> shared;
    shared["cv.train_days"] = std::to_string(config.train_days);
    shared["cv.eval_begin"] = std::to_string(config.eval_begin);
    shared["cv.eval_end"] = std::to_string(config.eval_end);
    shared["cv.refit_every"] = std::to_string(config.refit_every);
    shared["data.hash"] = hex16(series_hash(data));
    shared["data.start_date"] = format_date(data.start_date());
    shared["data.days"] = std::to_string(data.num_days());
    if (weather != nullptr) shared["weather.hash"] = hex16(weather_hash(*weather));

    std::vector<EvalReport> reports;
    reports.reserve(models.size());
    for (const auto& model : models) {
        EvalReport rep;
        rep.model_id = model->id();
        rep.mean_load = mean_load;
        rep.config_manifest = shared;
        rep.config_manifest["model.id"] = model->id();
        rep.config_manifest["model.config"] = model->config_summary();

        bool fitted = false;
        int last_fit_day = 0;
        for (int d = config.eval_begin; d < config.eval_end; ++d) {
            try {
                const LoadSeries window = slice_days(data, d - config.train_days, d);
                if (model->needs_fit() && (!fitted || d - last_fit_day >= config.refit_every)) {
                    if (weather != nullptr) {
                        const WeatherSeries wfit = slice_days(*weather, d - config.train_days, d);
                        model->fit(window, &wfit);
                    } else {
                        model->fit(window, nullptr);
                    }
                    fitted = true;
                    last_fit_day = d;
                }
                DayForecast f;
                if (weather != nullptr) {
                    const WeatherSeries wfc = slice_days(*weather, d - config.train_days, d + 1);
                    f = model->forecast(window, &wfc);
                } else {
                    f = model->forecast(window, nullptr);
                }
                if (static_cast<int>(f.values.size()) != kSamplesPerDay)
                    throw Error(ErrorKind::shape,
                                "model returned " + std::to_string(f.values.size()) +
                                    " values for a day of " + std::to_string(kSamplesPerDay));
                for (double v : f.values)
                    if (!std::isfinite(v))
                        throw Error(ErrorKind::numeric, "model produced a non-finite forecast value");
                f.model_id = rep.model_id;
                f.origin_day = d - 1;
                f.target_day = d;
                rep.daily_rmse.push_back({d, rmse(f.values, day_slice(data, d).values)});
            } catch (const std::exception& ex) {
                rep.failures.emplace_back(d, ex.what());
            }
        }

        double cum = 0.0;
        for (std::size_t i = 0; i < rep.daily_rmse.size(); ++i) {
            cum += rep.daily_rmse[i].rmse;
            rep.running_avg_rmse.push_back(cum / static_cast<double>(i + 1));
        }
        rep.relative_rmse = rep.daily_rmse.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                   : rep.running_avg_rmse.back() / mean_load;
        reports.push_back(std::move(rep));
    }
    return reports;
}

double relative_rmse(const EvalReport& report) {
    if (report.daily_rmse.empty() || report.running_avg_rmse.empty())
        throw Error(ErrorKind::validation, "relative RMSE needs at least one evaluated day");
    if (!(report.mean_load > 0.0))
        throw Error(ErrorKind::domain, "relative RMSE needs a positive mean load");
    return report.running_avg_rmse.back() / report.mean_load;
}

namespace {

std::string render_text_table(std::span<const EvalReport> reports) {
    std::size_t id_width = 5;  // "model"
    for (const auto& r : reports) id_width = std::max(id_width, r.model_id.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(id_width + 2)) << "model" << std::right
        << std::setw(15) << "relative RMSE" << std::setw(7) << "days" << std::setw(10)
        << "failures" << '\n';
    out << std::string(id_width + 2 + 15 + 7 + 10, '-') << '\n';
    for (const auto& r : reports) {
        out << std::left << std::setw(static_cast<int>(id_width + 2)) << r.model_id << std::right;
        if (std::isnan(r.relative_rmse)) {
            out << std::setw(15) << "n/a";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", r.relative_rmse);
            out << std::setw(15) << buf;
        }
        out << std::setw(7) << r.daily_rmse.size() << std::setw(10) << r.failures.size() << '\n';
    }
    return out.str();
}

std::string render_csv(std::span<const EvalReport> reports) {
    std::string out = "model_id,day,daily_rmse,running_avg_rmse\n";
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.daily_rmse.size(); ++i) {
            out += r.model_id;
            out += ',';
            out += std::to_string(r.daily_rmse[i].day);
            out += ',';
            out += shortest(r.daily_rmse[i].rmse);
            out += ',';
            out += shortest(r.running_avg_rmse[i]);
            out += '\n';
        }
    return out;
}

std::string render_svg(std::span<const EvalReport> reports) {
    constexpr double kW = 800, kH = 420, kL = 60, kR = 640, kT = 20, kB = 380;

    int day_min = std::numeric_limits<int>::max(), day_max = std::numeric_limits<int>::min();
    double y_max = 0.0;
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.daily_rmse.size(); ++i) {
            day_min = std::min(day_min, r.daily_rmse[i].day);
            day_max = std::max(day_max, r.daily_rmse[i].day);
            y_max = std::max(y_max, r.running_avg_rmse[i]);
        }
    if (day_min > day_max) {
        day_min = 0;
        day_max = 1;
    }
    if (y_max <= 0.0) y_max = 1.0;
    const double x_span = std::max(1, day_max - day_min);

    const auto x_of = [&](int day) {
        return kL + (kR - kL) * (static_cast<double>(day - day_min) / x_span);
    };
    const auto y_of = [&](double v) { return kB - (kB - kT) * (v / y_max); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kB << "\" x2=\"" << kR << "\" y2=\"" << kB
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kB
        << "\" stroke=\"#333\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = y_max * tick / 4.0;
        const double y = y_of(v);
        out << "<line x1=\"" << kL - 4 << "\" y1=\"" << coord(y) << "\" x2=\"" << kL << "\" y2=\""
            << coord(y) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << kL - 8 << "\" y=\"" << coord(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << coord(v) << "</text>\n";
    }
    out << "<text x=\"" << (kL + kR) / 2 << "\" y=\"" << kH - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">evaluation day</text>\n";
    out << "<text x=\"" << kL - 8 << "\" y=\"" << kT - 6
        << "\" text-anchor=\"end\" font-size=\"12\">running avg RMSE (kW)</text>\n";
    out << "<text x=\"" << coord(x_of(day_min)) << "\" y=\"" << kB + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << day_min << "</text>\n";
    out << "<text x=\"" << coord(x_of(day_max)) << "\" y=\"" << kB + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << day_max << "</text>\n";

    for (std::size_t m = 0; m < reports.size(); ++m) {
        const char* color = kPalette[m % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < reports[m].daily_rmse.size(); ++i) {
            if (i != 0) out << ' ';
            out << coord(x_of(reports[m].daily_rmse[i].day)) << ','
                << coord(y_of(reports[m].running_avg_rmse[i]));
        }
        out << "\"/>\n";
        const double ly = kT + 14 + 16 * static_cast<double>(m);
        out << "<line x1=\"" << kR + 12 << "\" y1=\"" << coord(ly - 4) << "\" x2=\"" << kR + 32
            << "\" y2=\"" << coord(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kR + 38 << "\" y=\"" << coord(ly) << "\" font-size=\"11\">"
            << reports[m].model_id << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::string render_report(std::span<const EvalReport> reports, ReportFormat format) {
    if (reports.empty()) throw Error(ErrorKind::input, "render_report needs at least one report");
    switch (format) {
        case ReportFormat::text_table: return render_text_table(reports);
        case ReportFormat::csv: return render_csv(reports);
        case ReportFormat::svg_plot: return render_svg(reports);
    }
    throw Error(ErrorKind::usage, "unknown report format");
}

std::string render_overlay_svg(const DayForecast& forecast, std::span<const double> actual) {
    if (forecast.values.size() != actual.size() || actual.empty())
        throw Error(ErrorKind::shape, "overlay needs a forecast and an actual day of equal length");
    constexpr double kW = 800, kH = 420, kL = 60, kR = 740, kT = 20, kB = 380;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : forecast.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : actual) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const auto x_of = [&](std::size_t i) {
        return kL + (kR - kL) * (static_cast<double>(i) / static_cast<double>(actual.size() - 1));
    };
    const auto y_of = [&](double v) { return kB - (kB - kT) * ((v - lo) / (hi - lo)); };
    const auto polyline = [&](std::span<const double> vals, const char* color) {
        std::ostringstream p;
        p << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i != 0) p << ' ';
            p << coord(x_of(i)) << ',' << coord(y_of(vals[i]));
        }
        p << "\"/>\n";
        return p.str();
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kB << "\" x2=\"" << kR << "\" y2=\"" << kB
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kB
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << (kL + kR) / 2 << "\" y=\"" << kH - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">slot of day " << forecast.target_day
        << "</text>\n";
    out << polyline(actual, "#1f77b4");
    out << polyline(forecast.values, "#d62728");
    out << "<text x=\"" << kL + 8 << "\" y=\"" << kT + 12
        << "\" font-size=\"11\" fill=\"#1f77b4\">actual</text>\n";
    out << "<text x=\"" << kL + 8 << "\" y=\"" << kT + 28 << "\" font-size=\"11\" fill=\"#d62728\">"
        << forecast.model_id << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::uint64_t fnv1a64_u64(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffU;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::uint64_t series_hash(const LoadSeries& series) {
    std::uint64_t h = 14695981039346656037ULL;
    h = fnv1a64_u64(h, static_cast<std::uint64_t>(series.start_epoch_s));
    for (double v : series.values) h = fnv1a64_u64(h, std::bit_cast<std::uint64_t>(v));
    return h;
}

std::uint64_t weather_hash(const WeatherSeries& weather) {
    std::uint64_t h = 14695981039346656037ULL;
    h = fnv1a64_u64(h, static_cast<std::uint64_t>(weather.start_epoch_s));
    for (double v : weather.solar_wm2) h = fnv1a64_u64(h, std::bit_cast<std::uint64_t>(v));
    for (double v : weather.temp_c) h = fnv1a64_u64(h, std::bit_cast<std::uint64_t>(v));
    return h;
}

std::string render_manifest(const std::map<std::string, std::string>& entries) {
    std::string out;
    for (const auto& [key, value] : entries) {
        if (key.empty() || key.find('=') != std::string::npos ||
            key.find('\n') != std::string::npos)
            throw Error(ErrorKind::input, "manifest key '" + key + "' is not representable");
        if (value.find('\n') != std::string::npos)
            throw Error(ErrorKind::input, "manifest value for '" + key + "' contains a newline");
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::map<std::string, std::string> parse_manifest(const std::string& text) {
    std::map<std::string, std::string> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::schema,
                        "manifest line " + std::to_string(line_no) + " has no '='");
        std::string key = line.substr(0, eq);
        if (entries.count(key) != 0)
            throw Error(ErrorKind::duplicate, "manifest key '" + key + "' appears twice");
        entries.emplace(std::move(key), line.substr(eq + 1));
    }
    return entries;
}

}  // namespace lf
