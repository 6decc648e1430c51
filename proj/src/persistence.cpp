#include "lf/persistence.hpp"

#include <string>

#include "lf/errors.hpp"

namespace lf {

namespace {

void check_history(const LoadSeries& history, int earliest_day, int latest_day, int d, int n) {
    if (n < 1) throw Error(ErrorKind::validation, "persistence n must be >= 1");
    if (earliest_day < 0 || latest_day >= history.num_days())
        throw Error(ErrorKind::history,
                    "forecast for day " + std::to_string(d) + " needs days " +
                        std::to_string(earliest_day) + ".." + std::to_string(latest_day) +
                        " but history holds days 0.." + std::to_string(history.num_days() - 1));
}

DayForecast averaged_days(const LoadSeries& history, int d, int first_day, int step, int n,
                          const char* model_id) {
    DayForecast fc;
    fc.model_id = model_id;
    fc.origin_day = d - 1;
    fc.target_day = d;
    fc.values.assign(kSamplesPerDay, 0.0);
    for (int i = 0; i < n; ++i) {
        const int day = first_day + i * step;
        const std::size_t base = static_cast<std::size_t>(day) * kSamplesPerDay;
        for (int t = 0; t < kSamplesPerDay; ++t) fc.values[t] += history.values[base + t];
    }
    for (double& v : fc.values) v /= n;
    return fc;
}

}  // namespace

DayForecast forecast_n_same_days(const LoadSeries& history, int n, int d) {
    check_history(history, d - 7 * n, d - 7, d, n);
    return averaged_days(history, d, d - 7 * n, 7, n, "n_same_days");
}

DayForecast forecast_n_days(const LoadSeries& history, int n, int d) {
    check_history(history, d - n, d - 1, d, n);
    return averaged_days(history, d, d - n, 1, n, "n_days");
}

DayForecast forecast_persistence(const LoadSeries& history, const PersistenceConfig& config, int d) {
    return config.variant == PersistenceVariant::same_days
               ? forecast_n_same_days(history, config.n, d)
               : forecast_n_days(history, config.n, d);
}

}  // namespace lf
