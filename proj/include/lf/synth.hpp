#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lf/timeseries.hpp"

namespace lf {

// Seeded generator of community load and weather fixtures. Every value is a
// pure function of the config, so fixtures are reproducible bit for bit.
//
// Each building's day template is two Gaussian bumps (sd 6 slots) over a base
// load, scaled down on weekends/holidays. Solar is a daylight half-sine whose
// amplitude follows the season and a per-day cloudiness draw; the coupling
// term adds coupling * solar_kw_m2 to the load (negative for PV prosumers).
// Gaussian noise is added last and the result is clipped at zero.
struct SynthConfig {
    int n_buildings = 3;
    int n_days = 90;
    std::uint64_t seed = 1;
    int morning_peak_slot = 32;  // ~8:00
    int evening_peak_slot = 72;  // ~18:00
    double weekend_scale = 0.6;
    double noise_sd = 0.0;           // kW
    double weather_coupling = 0.0;   // kW per kW/m^2 of solar radiation
    CivilDate start_date{2016, 1, 4};  // a Monday
};

struct SynthOutput {
    std::vector<LoadSeries> buildings;
    WeatherSeries weather;
};

SynthOutput generate(const SynthConfig& config);

}  // namespace lf
