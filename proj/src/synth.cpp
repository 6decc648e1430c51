#include "lf/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lf/errors.hpp"
#include "lf/rng.hpp"

namespace lf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss_bump(int slot, int center, double sd) {
    const double z = (slot - center) / sd;
    return std::exp(-0.5 * z * z);
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
    if (config.n_buildings < 1)
        throw Error(ErrorKind::validation, "synth needs at least one building");
    if (config.n_days < 14)
        throw Error(ErrorKind::validation, "synth needs at least 14 days for weekly structure");
    if (config.morning_peak_slot < 0 || config.morning_peak_slot >= kSamplesPerDay ||
        config.evening_peak_slot < 0 || config.evening_peak_slot >= kSamplesPerDay)
        throw Error(ErrorKind::validation, "peak slots must lie in 0..95");
    if (config.weekend_scale <= 0.0)
        throw Error(ErrorKind::validation, "weekend_scale must be positive");
    if (config.noise_sd < 0.0)
        throw Error(ErrorKind::validation, "noise_sd must be non-negative");

    const std::int64_t start_epoch = days_from_civil(config.start_date) * 86400;
    const std::size_t n = static_cast<std::size_t>(config.n_days) * kSamplesPerDay;
    const Calendar cal{config.start_date, {}};

    // Weather stream: the deterministic daylight half-sine (slots 24..72,
    // 6:00-18:00; amplitude peaks near midsummer) modulated by cloudiness.
    // Cloud cover starts at a fresh per-day level and drifts through the day
    // as a clamped random walk, so solar conditions persist for a few hours
    // at a time the way passing weather fronts do.
    WeatherSeries weather;
    weather.start_epoch_s = start_epoch;
    weather.solar_wm2.resize(n);
    weather.temp_c.resize(n);
    SplitMix64 weather_rng = SplitMix64::substream(config.seed, 0);
    const std::int64_t day_of_year0 = days_from_civil(config.start_date) -
                                      days_from_civil(CivilDate{config.start_date.year, 1, 1});
    for (int d = 0; d < config.n_days; ++d) {
        double cloud = 0.25 + 0.75 * weather_rng.next_uniform();
        const double doy = static_cast<double>(day_of_year0 + d);
        const double seasonal = 0.75 - 0.25 * std::cos(2.0 * kPi * (doy - 172.0) / 365.25);
        const double amp = 800.0 * seasonal;
        const double temp_base = 10.0 - 8.0 * std::cos(2.0 * kPi * (doy - 200.0) / 365.25);
        for (int t = 0; t < kSamplesPerDay; ++t) {
            const std::size_t i = static_cast<std::size_t>(d) * kSamplesPerDay + t;
            cloud = std::clamp(cloud + 0.1 * weather_rng.next_normal(), 0.05, 1.0);
            double solar = 0.0;
            if (t > 24 && t < 72) solar = amp * cloud * std::sin(kPi * (t - 24) / 48.0);
            weather.solar_wm2[i] = solar;
            weather.temp_c[i] = temp_base + 3.0 * std::sin(kPi * (t - 28) / 48.0);
        }
    }

    SynthOutput out;
    out.weather = std::move(weather);
    out.buildings.reserve(config.n_buildings);
    for (int b = 0; b < config.n_buildings; ++b) {
        SplitMix64 rng = SplitMix64::substream(config.seed, static_cast<std::uint64_t>(b) + 1);
        // Per-building template parameters drawn before any per-sample noise.
        const double base = 0.25 + 0.15 * rng.next_uniform();
        const double morning_amp = 0.8 + 0.6 * rng.next_uniform();
        const double evening_amp = 1.0 + 0.8 * rng.next_uniform();

        LoadSeries series;
        series.start_epoch_s = start_epoch;
        series.values.resize(n);
        for (int d = 0; d < config.n_days; ++d) {
            const double scale =
                cal.type_of_day(d) == DayType::weekend_or_holiday ? config.weekend_scale : 1.0;
            for (int t = 0; t < kSamplesPerDay; ++t) {
                const std::size_t i = static_cast<std::size_t>(d) * kSamplesPerDay + t;
                double v = base + morning_amp * gauss_bump(t, config.morning_peak_slot, 6.0) +
                           evening_amp * gauss_bump(t, config.evening_peak_slot, 6.0);
                v *= scale;
                v += config.weather_coupling * (out.weather.solar_wm2[i] / 1000.0);
                if (config.noise_sd > 0.0) v += config.noise_sd * rng.next_normal();
                series.values[i] = std::max(0.0, v);
            }
        }
        out.buildings.push_back(std::move(series));
    }
    return out;
}

}  // namespace lf
