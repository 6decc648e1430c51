#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "lf/calendar.hpp"
#include "lf/forecast.hpp"
#include "lf/linalg.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// Additive decomposition model (model id `gam_fourier`): a piecewise-linear
// trend, Fourier seasonalities, and per-date holiday indicators, fitted by
// (optionally ridge-penalized) least squares. Point forecasts evaluate the
// deterministic components; the residual scale is reported, not sampled.

struct GamConfig {
    // Slot indices where the trend slope may change; must be strictly
    // increasing and lie inside the training range.
    std::vector<std::int64_t> changepoints;
    // (period in slots, Fourier order) per seasonality.
    std::vector<std::pair<int, int>> fourier_orders{{kSamplesPerDay, 10},
                                                    {7 * kSamplesPerDay, 3}};
    std::set<CivilDate> holidays;
    double ridge = 0.0;
};

struct GamParams {
    double intercept = 0.0;
    double slope = 0.0;                  // base trend slope per slot
    std::vector<double> slope_deltas;    // one per changepoint
    // [seasonality][n-1] = (a_n, b_n) for cos/sin of frequency n.
    std::vector<std::vector<std::pair<double, double>>> fourier_coeffs;
    std::vector<double> holiday_effects;  // aligned with config.holidays order
    double noise_sd = 0.0;                // residual standard deviation
    CivilDate start_date{};               // date of day 0, anchors holiday columns
};

// Design matrix for slots [t_begin, t_end): columns are a constant, the raw
// slot index, one hinge max(0, t - c) per changepoint, cos/sin pairs for
// every seasonality order, and one 0/1 indicator per configured holiday date
// (1 on that date's 96 slots). `start_date` is the date of slot range
// [0, 96). Throws a validation error for malformed configs and an input
// error for an empty range.
Matrix build_design_matrix(std::int64_t t_begin, std::int64_t t_end, const GamConfig& config,
                           CivilDate start_date);

// Least squares over the training series. Columns that are identically zero
// in the training range (holidays outside it) are excluded from the solve
// and get coefficient 0. Throws a history error when the series has no more
// rows than the design has columns; a singular system at ridge = 0 raises a
// singularity error advising ridge > 0.
GamParams fit_gam(const LoadSeries& series, const GamConfig& config = {});

// Evaluates trend + seasonality + holiday effect over day `target_day`
// (slots [96 d, 96 (d+1))) in the frame params were fitted in. The trend
// extrapolates its final slope indefinitely.
DayForecast forecast_gam(const GamParams& params, const GamConfig& config, int target_day);

}  // namespace lf
