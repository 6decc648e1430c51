#include "lf/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lf/errors.hpp"

namespace lf {

namespace {

// Earliest day whose persistence estimate is computable.
int pm_min_day(const PersistenceConfig& pm) {
    return pm.variant == PersistenceVariant::same_days ? 7 * pm.n : pm.n;
}

int par_min_day(const ParConfig& config) { return std::max(1, pm_min_day(config.pm)); }

void check_weather_alignment(const LoadSeries& history, const WeatherSeries& weather, int d) {
    if (weather.start_epoch_s != history.start_epoch_s)
        throw Error(ErrorKind::alignment, "weather series start does not match load series");
    if (static_cast<std::size_t>(d + 1) * kSamplesPerDay > weather.solar_wm2.size())
        throw Error(ErrorKind::coverage,
                    "weather does not cover day " + std::to_string(d));
}

ParWeights fit_par_impl(const LoadSeries& history, const WeatherSeries* weather,
                        const ParConfig& config) {
    if (config.n_lags < 1) throw Error(ErrorKind::validation, "n_lags must be >= 1");
    const int d_min = par_min_day(config);
    const int n_days = history.num_days();
    if (n_days <= d_min + 1)
        throw Error(ErrorKind::history, "training window too short: needs more than " +
                                            std::to_string(d_min + 1) + " days, got " +
                                            std::to_string(n_days));
    const bool with_temp = config.use_temperature;
    if (weather) check_weather_alignment(history, *weather, n_days - 1);

    const int n_cols = config.n_lags + 1 + (weather ? 1 + (with_temp ? 1 : 0) : 0);
    const int n_rows = (n_days - d_min) * kSamplesPerDay;
    Matrix x(n_rows, n_cols);
    std::vector<double> y(n_rows);

    int row = 0;
    for (int d = d_min; d < n_days; ++d) {
        const DayForecast pm = forecast_persistence(history, config.pm, d);
        for (int t = 0; t < kSamplesPerDay; ++t, ++row) {
            const std::size_t g = static_cast<std::size_t>(d) * kSamplesPerDay + t;
            for (int i = 1; i <= config.n_lags; ++i) x.at(row, i - 1) = history.values[g - i];
            x.at(row, config.n_lags) = pm.values[t];
            if (weather) {
                x.at(row, config.n_lags + 1) = weather->solar_wm2[g];
                if (with_temp) x.at(row, config.n_lags + 2) = weather->temp_c[g];
            }
            y[row] = history.values[g];
        }
    }

    const std::vector<double> w = fit_ols(x, y, config.ridge);
    ParWeights out;
    out.ar.assign(w.begin(), w.begin() + config.n_lags);
    out.persistence = w[config.n_lags];
    if (weather) {
        out.solar = w[config.n_lags + 1];
        if (with_temp) out.temperature = w[config.n_lags + 2];
    }
    out.n_lags = config.n_lags;
    out.pm = config.pm;
    return out;
}

DayForecast forecast_par_impl(const ParWeights& weights, const LoadSeries& history,
                              const WeatherSeries* weather, int d) {
    if (weights.n_lags < 1 || static_cast<int>(weights.ar.size()) != weights.n_lags)
        throw Error(ErrorKind::validation, "inconsistent lag weights");
    if (d < par_min_day(ParConfig{weights.n_lags, weights.pm}))
        throw Error(ErrorKind::history, "forecast for day " + std::to_string(d) +
                                            " lacks history for lags or persistence term");
    if (d > history.num_days())
        throw Error(ErrorKind::history, "forecast day " + std::to_string(d) +
                                            " is more than one day past the data");
    if (weather) check_weather_alignment(history, *weather, d);

    const DayForecast pm = forecast_persistence(history, weights.pm, d);
    DayForecast fc;
    fc.model_id = weather ? "par_w" : "par";
    fc.origin_day = d - 1;
    fc.target_day = d;
    fc.values.resize(kSamplesPerDay);
    for (int t = 0; t < kSamplesPerDay; ++t) {
        double v = weights.persistence * pm.values[t];
        for (int i = 1; i <= weights.n_lags; ++i) {
            const double lag = t - i >= 0
                                   ? fc.values[t - i]
                                   : history.values[static_cast<std::size_t>(d) * kSamplesPerDay +
                                                    t - i];
            v += weights.ar[i - 1] * lag;
        }
        if (weather) {
            const std::size_t g = static_cast<std::size_t>(d) * kSamplesPerDay + t;
            v += *weights.solar * weather->solar_wm2[g];
            if (weights.temperature) v += *weights.temperature * weather->temp_c[g];
        }
        fc.values[t] = v;
    }
    return fc;
}

// Trailing sum of `window` slots of `values` ending at global index g,
// truncated at the series start.
double trailing_sum(const std::vector<double>& values, std::ptrdiff_t g, int window) {
    double acc = 0.0;
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, g - window + 1);
    for (std::ptrdiff_t i = first; i <= g; ++i) acc += values[static_cast<std::size_t>(i)];
    return acc;
}

// Nearest-rank quantile of the day totals for days [0, d).
double day_total_quantile(const LoadSeries& history, int d, double q) {
    std::vector<double> totals(d);
    for (int day = 0; day < d; ++day) {
        double acc = 0.0;
        const std::size_t base = static_cast<std::size_t>(day) * kSamplesPerDay;
        for (int t = 0; t < kSamplesPerDay; ++t) acc += history.values[base + t];
        totals[day] = acc;
    }
    std::sort(totals.begin(), totals.end());
    const int rank = std::max(1, static_cast<int>(std::ceil(q * d)));
    return totals[rank - 1];
}

double day_total(const LoadSeries& history, int day) {
    double acc = 0.0;
    const std::size_t base = static_cast<std::size_t>(day) * kSamplesPerDay;
    for (int t = 0; t < kSamplesPerDay; ++t) acc += history.values[base + t];
    return acc;
}

}  // namespace

ParRow build_par_row(const LoadSeries& history, int d, int t, int n_lags,
                     const PersistenceConfig& pm) {
    if (n_lags < 1) throw Error(ErrorKind::validation, "n_lags must be >= 1");
    if (t < 0 || t >= kSamplesPerDay) throw Error(ErrorKind::range, "slot out of range");
    const std::ptrdiff_t g = static_cast<std::ptrdiff_t>(d) * kSamplesPerDay + t;
    if (d < pm_min_day(pm) || g - n_lags < 0 ||
        g >= static_cast<std::ptrdiff_t>(history.values.size()))
        throw Error(ErrorKind::history,
                    "row at day " + std::to_string(d) + " slot " + std::to_string(t) +
                        " lacks history for lags or persistence term");

    const DayForecast pm_fc = forecast_persistence(history, pm, d);
    ParRow row;
    row.features.resize(n_lags + 1);
    for (int i = 1; i <= n_lags; ++i)
        row.features[i - 1] = history.values[static_cast<std::size_t>(g - i)];
    row.features[n_lags] = pm_fc.values[t];
    row.target = history.values[static_cast<std::size_t>(g)];
    return row;
}

ParWeights fit_par(const LoadSeries& history, const ParConfig& config) {
    return fit_par_impl(history, nullptr, config);
}

ParWeights fit_par_w(const LoadSeries& history, const WeatherSeries& weather,
                     const ParConfig& config) {
    return fit_par_impl(history, &weather, config);
}

DayForecast forecast_par(const ParWeights& weights, const LoadSeries& history, int d) {
    return forecast_par_impl(weights, history, nullptr, d);
}

DayForecast forecast_par_w(const ParWeights& weights, const LoadSeries& history,
                           const WeatherSeries& weather_forecast, int d) {
    if (!weights.solar)
        throw Error(ErrorKind::validation, "weights carry no solar term; fit the weather variant");
    return forecast_par_impl(weights, history, &weather_forecast, d);
}

std::array<double, 15> build_spr_features(const LoadSeries& history, const Calendar& calendar,
                                          int d, int t, const SprWindowConfig& windows) {
    if (t < 0 || t >= kSamplesPerDay) throw Error(ErrorKind::range, "slot out of range");
    if (windows.rs_window_slots < 1 || windows.h_window_slots < 1)
        throw Error(ErrorKind::validation, "window lengths must be >= 1");
    // The day-over-day difference at day d-7 reaches back to day d-8.
    if (d < 8)
        throw Error(ErrorKind::history, "features for day " + std::to_string(d) +
                                            " need at least 8 full days of history");

    const auto at_day = [&](int day, int slot) -> std::ptrdiff_t {
        return static_cast<std::ptrdiff_t>(day) * kSamplesPerDay + slot;
    };
    const std::vector<double>& v = history.values;
    const std::ptrdiff_t g1 = at_day(d - 1, t);
    const std::ptrdiff_t g7 = at_day(d - 7, t);
    if (g1 >= static_cast<std::ptrdiff_t>(v.size()))
        throw Error(ErrorKind::history, "history does not cover day " + std::to_string(d - 1));

    const auto hsum = [&](std::ptrdiff_t g) { return trailing_sum(v, g, windows.h_window_slots); };

    const double low_thr = day_total_quantile(history, d, windows.low_q);
    const double high_thr = day_total_quantile(history, d, windows.high_q);
    const double total1 = day_total(history, d - 1);
    const double total7 = day_total(history, d - 7);

    std::array<double, 15> f{};
    f[0] = calendar.type_of_day(d) == DayType::weekend_or_holiday ? 1.0 : 0.0;
    f[1] = v[static_cast<std::size_t>(g1)];
    f[2] = v[static_cast<std::size_t>(g7)];
    f[3] = trailing_sum(v, g1, windows.rs_window_slots);
    f[4] = trailing_sum(v, g7, windows.rs_window_slots);
    f[5] = hsum(g1);
    f[6] = hsum(g7);
    f[7] = v[static_cast<std::size_t>(g1)] - v[static_cast<std::size_t>(g1 - kSamplesPerDay)];
    f[8] = v[static_cast<std::size_t>(g7)] - v[static_cast<std::size_t>(g7 - kSamplesPerDay)];
    f[9] = hsum(g1) - hsum(g1 - windows.h_window_slots);
    f[10] = hsum(g7) - hsum(g7 - windows.h_window_slots);
    f[11] = total1 < low_thr ? 1.0 : 0.0;
    f[12] = total7 < low_thr ? 1.0 : 0.0;
    f[13] = total1 > high_thr ? 1.0 : 0.0;
    f[14] = total7 > high_thr ? 1.0 : 0.0;
    return f;
}

SprWeights fit_spr(const LoadSeries& history, const Calendar& calendar, const SprConfig& config) {
    const int n_days = history.num_days();
    if (n_days < 10)
        throw Error(ErrorKind::history,
                    "training window too short: needs at least 10 days, got " +
                        std::to_string(n_days));

    const int d_min = 8;
    Matrix x((n_days - d_min) * kSamplesPerDay, 15);
    std::vector<double> y(static_cast<std::size_t>(x.rows));
    int row = 0;
    for (int d = d_min; d < n_days; ++d)
        for (int t = 0; t < kSamplesPerDay; ++t, ++row) {
            const auto f = build_spr_features(history, calendar, d, t, config.windows);
            for (int c = 0; c < 15; ++c) x.at(row, c) = f[c];
            y[row] = history.values[static_cast<std::size_t>(d) * kSamplesPerDay + t];
        }

    const std::vector<double> w = fit_ols(x, y, config.ridge);
    SprWeights out;
    std::copy(w.begin(), w.end(), out.a.begin());
    return out;
}

DayForecast forecast_spr(const SprWeights& weights, const LoadSeries& history,
                         const Calendar& calendar, int d, const SprWindowConfig& windows) {
    if (d > history.num_days())
        throw Error(ErrorKind::history, "forecast day " + std::to_string(d) +
                                            " is more than one day past the data");
    DayForecast fc;
    fc.model_id = "spr";
    fc.origin_day = d - 1;
    fc.target_day = d;
    fc.values.resize(kSamplesPerDay);
    for (int t = 0; t < kSamplesPerDay; ++t) {
        const auto f = build_spr_features(history, calendar, d, t, windows);
        double v = 0.0;
        for (int c = 0; c < 15; ++c) v += weights.a[c] * f[c];
        fc.values[t] = v;
    }
    return fc;
}

}  // namespace lf
