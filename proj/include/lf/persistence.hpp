#pragma once

#include "lf/forecast.hpp"
#include "lf/timeseries.hpp"

namespace lf {

enum class PersistenceVariant { same_days, consecutive_days };

struct PersistenceConfig {
    int n = 1;
    PersistenceVariant variant = PersistenceVariant::consecutive_days;

    static PersistenceConfig same_days_default() { return {4, PersistenceVariant::same_days}; }
    static PersistenceConfig consecutive_default() { return {3, PersistenceVariant::consecutive_days}; }
};

// Slot-wise mean of the same weekday over the n previous weeks
// (days d-7, d-14, ..., d-7n).
DayForecast forecast_n_same_days(const LoadSeries& history, int n, int d);

// Slot-wise mean of the n previous days (days d-n .. d-1).
DayForecast forecast_n_days(const LoadSeries& history, int n, int d);

DayForecast forecast_persistence(const LoadSeries& history, const PersistenceConfig& config, int d);

}  // namespace lf
