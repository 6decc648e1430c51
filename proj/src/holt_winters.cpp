#include "lf/holt_winters.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lf/errors.hpp"
#include "lf/nelder_mead.hpp"

namespace lf {

namespace {

void check_params(const HwParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0 && p.beta > 0.0 && p.beta < 1.0 && p.gamma > 0.0 &&
          p.gamma < 1.0))
        throw Error(ErrorKind::validation, "smoothing factors must lie strictly inside (0,1)");
    if (p.period < 2) throw Error(ErrorKind::validation, "period must be at least 2");
}

}  // namespace

HwState hw_init(const LoadSeries& history, const HwParams& params) {
    check_params(params);
    const int T = params.period;
    if (static_cast<int>(history.values.size()) < 2 * T)
        throw Error(ErrorKind::history, "initialization needs at least " + std::to_string(2 * T) +
                                            " samples, got " + std::to_string(history.values.size()));
    double mean1 = 0.0, mean2 = 0.0;
    for (int i = 0; i < T; ++i) {
        mean1 += history.values[i];
        mean2 += history.values[i + T];
    }
    mean1 /= T;
    mean2 /= T;

    HwState state;
    state.level = mean1;
    state.trend = (mean2 - mean1) / T;
    state.season.resize(T);
    for (int i = 0; i < T; ++i) state.season[i] = history.values[i] - mean1;
    state.t = 0;
    return state;
}

HwState hw_step(const HwState& state, const HwParams& params, double y) {
    check_params(params);
    if (!std::isfinite(y)) throw Error(ErrorKind::input, "observation must be finite");
    const int T = params.period;
    const std::size_t slot = static_cast<std::size_t>(state.t % T);
    const double s_old = state.season[slot];

    HwState next = state;
    next.level = params.alpha * (y - s_old) + (1.0 - params.alpha) * (state.level + state.trend);
    next.trend = params.beta * (next.level - state.level) + (1.0 - params.beta) * state.trend;
    next.season[slot] = params.gamma * (y - next.level) + (1.0 - params.gamma) * s_old;
    next.t = state.t + 1;
    return next;
}

DayForecast hw_forecast(const HwState& state, const HwParams& params, int k) {
    check_params(params);
    if (k < 1) throw Error(ErrorKind::range, "forecast horizon must be >= 1");
    const int T = params.period;
    DayForecast fc;
    fc.model_id = "hw";
    fc.origin_day = static_cast<int>(state.t) / kSamplesPerDay - 1;
    fc.target_day = fc.origin_day + 1;
    fc.values.resize(k);
    for (int h = 1; h <= k; ++h) {
        const std::size_t slot = static_cast<std::size_t>((state.t + h - 1) % T);
        fc.values[h - 1] = state.level + h * state.trend + state.season[slot];
    }
    return fc;
}

double hw_one_step_sse(const LoadSeries& history, const HwParams& params) {
    HwState state = hw_init(history, params);
    double sse = 0.0;
    for (double y : history.values) {
        const std::size_t slot = static_cast<std::size_t>(state.t % params.period);
        const double pred = state.level + state.trend + state.season[slot];
        const double e = y - pred;
        sse += e * e;
        state = hw_step(state, params, y);
    }
    return sse;
}

HwParams hw_fit(const LoadSeries& history, int period, const HwFitConfig& config) {
    if (static_cast<int>(history.values.size()) < 3 * period)
        throw Error(ErrorKind::history, "fitting needs at least 3 periods of history");

    HwParams best;
    best.period = period;
    double best_sse = std::numeric_limits<double>::infinity();
    // Ascending scan with strict improvement keeps the lexicographically
    // smallest parameters on ties.
    for (double a = config.grid_min; a <= config.grid_max + 1e-12; a += config.grid_step)
        for (double b = config.grid_min; b <= config.grid_max + 1e-12; b += config.grid_step)
            for (double g = config.grid_min; g <= config.grid_max + 1e-12; g += config.grid_step) {
                const HwParams p{a, b, g, period};
                const double sse = hw_one_step_sse(history, p);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = p;
                }
            }

    NelderMeadOptions options;
    options.max_iterations = config.refine_max_iterations;
    options.simplex_tolerance = config.refine_tolerance;
    options.initial_step = config.grid_step / 2.0;
    options.lower = {1e-3, 1e-3, 1e-3};
    options.upper = {1.0 - 1e-3, 1.0 - 1e-3, 1.0 - 1e-3};
    const NelderMeadResult refined = nelder_mead(
        [&](const std::vector<double>& x) {
            return hw_one_step_sse(history, HwParams{x[0], x[1], x[2], period});
        },
        {best.alpha, best.beta, best.gamma}, options);
    if (refined.value < best_sse)
        best = HwParams{refined.x[0], refined.x[1], refined.x[2], period};
    return best;
}

}  // namespace lf
