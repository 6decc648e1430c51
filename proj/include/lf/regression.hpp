#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lf/calendar.hpp"
#include "lf/forecast.hpp"
#include "lf/linalg.hpp"
#include "lf/persistence.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// Persistence-augmented autoregression: n slot-level lags plus a persistence
// model's day-ahead estimate, combined linearly. The weather variant appends
// a solar term (and optionally temperature).
struct ParConfig {
    int n_lags = 4;  // one hour of AR memory
    PersistenceConfig pm = PersistenceConfig::consecutive_default();
    bool use_temperature = false;  // weather variant may add a temperature term
    double ridge = 1e-8;           // guards near-singular training windows
};

struct ParWeights {
    std::vector<double> ar;  // a_1..a_n, most recent lag first
    double persistence = 0.0;  // b_0
    std::optional<double> solar;        // c_0, present for the weather variant
    std::optional<double> temperature;  // c_1, optional weather extension
    int n_lags = 0;
    PersistenceConfig pm;
};

struct ParRow {
    std::vector<double> features;  // [lag_1..lag_n, pm estimate(, solar, temp)]
    double target = 0.0;
};

// One training row at (day d, slot t): lag features are measured values at the
// n global slots before 96d+t, then the persistence estimate for (d, t).
ParRow build_par_row(const LoadSeries& history, int d, int t, int n_lags,
                     const PersistenceConfig& pm);

ParWeights fit_par(const LoadSeries& history, const ParConfig& config = {});
ParWeights fit_par_w(const LoadSeries& history, const WeatherSeries& weather,
                     const ParConfig& config = {});

// Recursive day-ahead forecast: within day d, lag slots that the model has
// already predicted feed back as inputs; earlier slots use measured history.
DayForecast forecast_par(const ParWeights& weights, const LoadSeries& history, int d);
DayForecast forecast_par_w(const ParWeights& weights, const LoadSeries& history,
                           const WeatherSeries& weather_forecast, int d);

// Seasonal persistence regression: 15 deterministic features from days d-1 and
// d-7, no recursion.
struct SprWindowConfig {
    int rs_window_slots = 8;  // trailing rolling-sum window (2 h)
    int h_window_slots = 4;   // trailing hourly-sum window (1 h)
    double low_q = 0.25;      // day-total quantile for the low flag
    double high_q = 0.75;     // day-total quantile for the high flag
};

struct SprConfig {
    SprWindowConfig windows;
    double ridge = 1e-8;
};

struct SprWeights {
    std::array<double, 15> a{};  // a_0..a_14, feature order below
};

// Feature order: [0] day-type flag of d; [1] y_{d-1}(t); [2] y_{d-7}(t);
// [3,4] rolling sums at d-1/d-7; [5,6] hourly sums; [7,8] day-over-day
// differences; [9,10] hourly-sum differences; [11,12] low flags; [13,14] high
// flags. Low/high compare the source day's total against quantiles of the
// day totals strictly before day d.
std::array<double, 15> build_spr_features(const LoadSeries& history, const Calendar& calendar,
                                          int d, int t, const SprWindowConfig& windows = {});

SprWeights fit_spr(const LoadSeries& history, const Calendar& calendar,
                   const SprConfig& config = {});

DayForecast forecast_spr(const SprWeights& weights, const LoadSeries& history,
                         const Calendar& calendar, int d, const SprWindowConfig& windows = {});

}  // namespace lf
