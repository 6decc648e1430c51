#pragma once

#include <vector>

#include "lf/forecast.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// Additive triple exponential smoothing. `period` is the season length in
// samples (96 = daily seasonality).
struct HwParams {
    double alpha = 0.5;  // data smoothing factor
    double beta = 0.5;   // trend smoothing factor
    double gamma = 0.5;  // seasonal smoothing factor
    int period = kSamplesPerDay;
};

// Level/trend plus a seasonal ring of `period` entries. The ring slot for
// time t is t mod period: reading it before the update yields the seasonal
// component from one period ago.
struct HwState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> season;
    long t = 0;  // samples consumed so far
};

struct HwFitConfig {
    double grid_min = 0.05;
    double grid_max = 0.95;
    double grid_step = 0.05;
    int refine_max_iterations = 200;
    double refine_tolerance = 1e-8;
};

// Two-season initialization: level = mean of the first season, trend = the
// per-sample change between the first two season means, seasonal ring = first
// season minus its mean. Consumes no samples (t = 0).
HwState hw_init(const LoadSeries& history, const HwParams& params);

// One observation through the level/trend/seasonal recursions.
HwState hw_step(const HwState& state, const HwParams& params, double y);

// Closed-form k-step forecast: level + h*trend + seasonal ring (wrapping).
DayForecast hw_forecast(const HwState& state, const HwParams& params, int k = kSamplesPerDay);

// In-sample one-step-ahead SSE over a full pass of hw_step, minimized by a
// coarse grid and a Nelder-Mead refinement from the best grid point. Ties on
// the grid go to the lexicographically smallest (alpha, beta, gamma).
HwParams hw_fit(const LoadSeries& history, int period = kSamplesPerDay,
                const HwFitConfig& config = {});

// The fitting objective, exposed for tests.
double hw_one_step_sse(const LoadSeries& history, const HwParams& params);

}  // namespace lf
