#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lf/checkpoint.hpp"
#include "lf/forecast.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// Root mean squared error between two aligned vectors. Lengths must match
// and values must be finite.
double rmse(std::span<const double> forecast, std::span<const double> actual);

// A model the rolling harness can drive. The harness owns causality: fit()
// and forecast() both receive a trailing window that ends the day before the
// forecast target, so a model cannot read the future even by accident. The
// forecast target is always the day after the window (local index
// window.num_days()); the harness rewrites the result to absolute days.
//
// Windows keep their absolute timestamps, so weekday- or date-sensitive
// models stay aligned as the window slides. The weather pointer is null when
// the dataset has no weather companion; the window passed to forecast()
// additionally covers the target day (a day-ahead weather forecast is
// assumed available).
class ForecastModel {
public:
    virtual ~ForecastModel() = default;

    virtual std::string id() const = 0;
    // Compact JSON echo of the effective parameters, for manifests.
    virtual std::string config_summary() const { return "{}"; }
    // Persistence-style models need no fitting pass.
    virtual bool needs_fit() const { return true; }

    virtual void fit(const LoadSeries& window, const WeatherSeries* weather) = 0;
    virtual DayForecast forecast(const LoadSeries& window, const WeatherSeries* weather) = 0;

    // Compact JSON of the fitted parameters ("{}" for stateless or unfitted
    // models), for parameter files and debugging.
    virtual std::string fitted_summary() const { return "{}"; }
    // Binary checkpoint of the fitted parameters, for models that support it.
    virtual std::optional<Checkpoint> checkpoint() const { return std::nullopt; }
};

// Diagnostic model that returns the actual target day from a full copy of
// the dataset. It is deliberately clairvoyant (its RMSE is exactly zero), so
// it is excluded from causality guarantees; use it to validate a harness or
// a pipeline, never as a baseline.
std::unique_ptr<ForecastModel> make_oracle_model(LoadSeries full_data);

struct DailyError {
    int day = 0;        // absolute target day index
    double rmse = 0.0;  // kW

    bool operator==(const DailyError&) const = default;
};

struct EvalReport {
    std::string model_id;
    std::vector<DailyError> daily_rmse;        // successfully forecast days only
    std::vector<double> running_avg_rmse;      // exact prefix means of daily_rmse
    double relative_rmse = 0.0;                // NaN when every day failed
    double mean_load = 0.0;                    // mean actual load over the range, kW
    std::map<std::string, std::string> config_manifest;
    std::vector<std::pair<int, std::string>> failures;  // (day, reason)
};

struct RollingCvConfig {
    int train_days = 60;  // trailing window handed to fit() and forecast()
    int eval_begin = 0;   // first forecast target day (absolute index)
    int eval_end = 0;     // one past the last target day
    int refit_every = 7;  // days between fitting passes; 1 refits daily
};

// Day-ahead rolling-origin cross-validation. For each target day d in
// [eval_begin, eval_end) and each model: refit on the window [d-train_days,
// d) when the refit cadence says so, forecast day d from the same window,
// and score against the actual day. A model failure on a day is recorded in
// the report and the run continues. Models run sequentially in list order;
// everything is deterministic.
std::vector<EvalReport> rolling_cv(const std::vector<std::unique_ptr<ForecastModel>>& models,
                                   const LoadSeries& data, const WeatherSeries* weather,
                                   const RollingCvConfig& config);

// Final running-average RMSE divided by mean load (dimensionless).
double relative_rmse(const EvalReport& report);

// Whole days [first_day, last_day) as a new series; absolute timestamps are
// preserved so calendar alignment survives slicing.
LoadSeries slice_days(const LoadSeries& series, int first_day, int last_day);
WeatherSeries slice_days(const WeatherSeries& weather, int first_day, int last_day);

enum class ReportFormat { text_table, csv, svg_plot };

// Renders a set of reports: a fixed-width comparison table of relative RMSE
// per model, a CSV of the daily and running-average traces, or an SVG line
// chart of the running-average traces.
std::string render_report(std::span<const EvalReport> reports, ReportFormat format);

// One day of forecast against the measured day, as an SVG overlay.
std::string render_overlay_svg(const DayForecast& forecast, std::span<const double> actual);

// FNV-1a 64-bit over raw bytes; the manifest's data fingerprint.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t series_hash(const LoadSeries& series);
std::uint64_t weather_hash(const WeatherSeries& weather);

// Manifest text: sorted "key=value" lines, one per entry. '#' starts a
// comment line; values may contain '='.
std::string render_manifest(const std::map<std::string, std::string>& entries);
std::map<std::string, std::string> parse_manifest(const std::string& text);

}  // namespace lf
