#include "lf/sarima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lf/errors.hpp"
#include "lf/nelder_mead.hpp"

namespace lf {

namespace {

void check_order(const SarimaOrder& o) {
    if (o.p < 0 || o.d < 0 || o.q < 0 || o.P < 0 || o.D < 0 || o.Q < 0)
        throw Error(ErrorKind::validation, "order components must be non-negative");
    if (o.S < 2) throw Error(ErrorKind::validation, "season length S must be >= 2");
}

std::vector<double> single_difference(const std::vector<double>& v, int lag) {
    std::vector<double> out(v.size() - lag);
    for (std::size_t i = lag; i < v.size(); ++i) out[i - lag] = v[i] - v[i - lag];
    return out;
}

// One-step linear prediction of centered value z~(t) from the multiplicative
// SARMA expansion; `zc` is the centered series, `eps` the residuals so far
// (zero where not yet computed or out of range).
double predict_centered(const SarimaParams& m, const std::vector<double>& zc,
                        const std::vector<double>& eps, std::ptrdiff_t t) {
    const SarimaOrder& o = m.order;
    const auto z_at = [&](std::ptrdiff_t i) { return i >= 0 ? zc[i] : 0.0; };
    const auto e_at = [&](std::ptrdiff_t i) {
        return i >= 0 && i < static_cast<std::ptrdiff_t>(eps.size()) ? eps[i] : 0.0;
    };

    double pred = 0.0;
    for (int i = 1; i <= o.p; ++i) pred += m.ar[i - 1] * z_at(t - i);
    for (int j = 1; j <= o.P; ++j) pred += m.sar[j - 1] * z_at(t - j * o.S);
    for (int i = 1; i <= o.p; ++i)
        for (int j = 1; j <= o.P; ++j) pred -= m.ar[i - 1] * m.sar[j - 1] * z_at(t - i - j * o.S);
    for (int i = 1; i <= o.q; ++i) pred += m.ma[i - 1] * e_at(t - i);
    for (int j = 1; j <= o.Q; ++j) pred += m.sma[j - 1] * e_at(t - j * o.S);
    for (int i = 1; i <= o.q; ++i)
        for (int j = 1; j <= o.Q; ++j) pred += m.ma[i - 1] * m.sma[j - 1] * e_at(t - i - j * o.S);
    return pred;
}

SarimaParams params_from_vector(const SarimaOrder& order, const std::vector<double>& x) {
    SarimaParams m;
    m.order = order;
    auto it = x.begin();
    m.ar.assign(it, it + order.p);
    it += order.p;
    m.ma.assign(it, it + order.q);
    it += order.q;
    m.sar.assign(it, it + order.P);
    it += order.P;
    m.sma.assign(it, it + order.Q);
    it += order.Q;
    m.intercept = *it;
    return m;
}

}  // namespace

std::vector<double> difference(const std::vector<double>& values, int d, int D, int S) {
    if (d < 0 || D < 0 || S < 2) throw Error(ErrorKind::validation, "invalid differencing order");
    if (static_cast<int>(values.size()) <= d + D * S)
        throw Error(ErrorKind::length, "series too short to difference: need more than " +
                                           std::to_string(d + D * S) + " values");
    std::vector<double> out = values;
    for (int i = 0; i < d; ++i) out = single_difference(out, 1);
    for (int j = 0; j < D; ++j) out = single_difference(out, S);
    return out;
}

std::vector<double> undifference(const std::vector<double>& diff_forecasts,
                                 const std::vector<double>& tail, int d, int D, int S) {
    if (d < 0 || D < 0 || S < 2) throw Error(ErrorKind::validation, "invalid differencing order");
    const int need = d + D * S;
    if (static_cast<int>(tail.size()) < need)
        throw Error(ErrorKind::length, "undifference needs the last " + std::to_string(need) +
                                           " original values, got " + std::to_string(tail.size()));
    if (need == 0) return diff_forecasts;

    // Rebuild the intermediate differencing stages of the tail, mirroring the
    // d-then-D application order.
    std::vector<std::vector<double>> stages;
    stages.push_back(std::vector<double>(tail.end() - need, tail.end()));
    for (int i = 0; i < d; ++i) stages.push_back(single_difference(stages.back(), 1));
    for (int j = 0; j < D; ++j) stages.push_back(single_difference(stages.back(), S));

    // Invert outermost first: seasonal integrations, then ordinary ones. Each
    // stage's tail supplies the seed values the integration reads.
    std::vector<double> cur = diff_forecasts;
    for (int j = D; j >= 1; --j) {
        std::vector<double> seed = stages[d + j - 1];  // lower stage's recent values
        for (double& v : cur) {
            v += seed[seed.size() - S];
            seed.push_back(v);
        }
    }
    for (int i = d; i >= 1; --i) {
        double prev = stages[i - 1].back();
        for (double& v : cur) {
            v += prev;
            prev = v;
        }
    }
    return cur;
}

double css_objective(const SarimaParams& params, const std::vector<double>& differenced) {
    const SarimaOrder& o = params.order;
    check_order(o);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(differenced.size());
    const std::ptrdiff_t t0 = o.p + o.P * o.S;
    if (n <= t0) throw Error(ErrorKind::length, "differenced series shorter than AR conditioning");

    std::vector<double> zc(differenced.size());
    for (std::size_t i = 0; i < differenced.size(); ++i) zc[i] = differenced[i] - params.intercept;

    std::vector<double> eps(differenced.size(), 0.0);
    double sse = 0.0;
    for (std::ptrdiff_t t = t0; t < n; ++t) {
        const double e = zc[t] - predict_centered(params, zc, eps, t);
        if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
        eps[t] = e;
        sse += e * e;
    }
    return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
}

double aic(double css_value, int n_eff, int k_params) {
    if (!(css_value > 0.0)) throw Error(ErrorKind::domain, "AIC needs a positive sum of squares");
    if (n_eff <= k_params) throw Error(ErrorKind::domain, "AIC needs n_eff > k_params");
    return n_eff * std::log(css_value / n_eff) + 2.0 * k_params;
}

SarimaParams fit_sarima(const LoadSeries& series, const SarimaOrder& order,
                        const SarimaFitConfig& config) {
    check_order(order);
    if (order.coeff_count() < 1)
        throw Error(ErrorKind::validation, "fit needs at least one AR or MA coefficient");

    std::vector<double> values = series.values;
    if (order.S == kSamplesPerDay && config.s96_window_cap_days > 0 &&
        series.num_days() > config.s96_window_cap_days)
        values.assign(series.values.end() -
                          static_cast<std::ptrdiff_t>(config.s96_window_cap_days) * kSamplesPerDay,
                      series.values.end());

    const int n = static_cast<int>(values.size());
    const int min_len = 3 * (order.d + order.D * order.S) + 10 * order.coeff_count();
    if (n < min_len || n <= order.d + order.D * order.S + order.p + order.P * order.S)
        throw Error(ErrorKind::history, "training series too short for order: need at least " +
                                            std::to_string(min_len) + " values, got " +
                                            std::to_string(n));

    const std::vector<double> z = difference(values, order.d, order.D, order.S);
    const double z_mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());

    std::vector<double> x0(order.coeff_count() + 1, 0.0);
    x0.back() = z_mean;

    NelderMeadOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.simplex_tolerance = config.tolerance;
    opts.initial_step = config.initial_step;
    const NelderMeadResult res = nelder_mead(
        [&](const std::vector<double>& x) {
            return css_objective(params_from_vector(order, x), z);
        },
        x0, opts);

    SarimaParams best = params_from_vector(order, res.x);
    const std::ptrdiff_t n_eff = static_cast<std::ptrdiff_t>(z.size()) - (order.p + order.P * order.S);
    best.sigma2 = res.value / static_cast<double>(n_eff);
    best.converged = res.converged;
    if (!res.converged) best.warnings.push_back("optimizer hit the iteration cap");
    const auto flag_unit_root = [&](const std::vector<double>& c, const char* name) {
        for (double v : c)
            if (std::abs(v) >= 1.0)
                best.warnings.push_back(std::string(name) + " coefficient at or beyond unit root");
    };
    flag_unit_root(best.ar, "ar");
    flag_unit_root(best.ma, "ma");
    flag_unit_root(best.sar, "seasonal ar");
    flag_unit_root(best.sma, "seasonal ma");
    return best;
}

SarimaOrder select_order(const LoadSeries& series, const std::vector<SarimaOrder>& candidates,
                         const SarimaFitConfig& config) {
    if (candidates.empty()) throw Error(ErrorKind::validation, "candidate list is empty");

    bool have_best = false;
    SarimaOrder best;
    double best_aic = 0.0;
    int best_k = 0;
    std::string last_error = "no candidate fitted";
    for (const SarimaOrder& cand : candidates) {
        double cand_aic;
        try {
            const SarimaParams fit = fit_sarima(series, cand, config);
            const int n_values =
                cand.S == kSamplesPerDay && config.s96_window_cap_days > 0
                    ? std::min<int>(static_cast<int>(series.values.size()),
                                    config.s96_window_cap_days * kSamplesPerDay)
                    : static_cast<int>(series.values.size());
            const int n_eff =
                n_values - (cand.d + cand.D * cand.S) - (cand.p + cand.P * cand.S);
            cand_aic = aic(fit.sigma2 * n_eff, n_eff, cand.coeff_count() + 1);
        } catch (const Error& e) {
            last_error = e.what();
            continue;
        }
        const int k = cand.coeff_count() + 1;
        const bool tie = have_best && std::abs(cand_aic - best_aic) <= 1e-9;
        if (!have_best || (tie && k < best_k) || (!tie && cand_aic < best_aic)) {
            have_best = true;
            best = cand;
            best_aic = cand_aic;
            best_k = k;
        }
    }
    if (!have_best) throw Error(ErrorKind::domain, "all candidates failed to fit: " + last_error);
    return best;
}

DayForecast forecast_sarima(const SarimaParams& params, const LoadSeries& history, int k) {
    const SarimaOrder& o = params.order;
    check_order(o);
    if (k < 1) throw Error(ErrorKind::range, "forecast horizon must be >= 1");
    if (static_cast<int>(params.ar.size()) != o.p || static_cast<int>(params.ma.size()) != o.q ||
        static_cast<int>(params.sar.size()) != o.P || static_cast<int>(params.sma.size()) != o.Q)
        throw Error(ErrorKind::shape, "coefficient counts do not match the order");
    const int need = o.d + o.D * o.S + std::max(o.p + o.P * o.S, 1);
    if (static_cast<int>(history.values.size()) <= need)
        throw Error(ErrorKind::history, "history too short to forecast: need more than " +
                                            std::to_string(need) + " values");

    const std::vector<double> z = difference(history.values, o.d, o.D, o.S);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());

    std::vector<double> zc(z.size() + k);
    for (std::ptrdiff_t i = 0; i < n; ++i) zc[i] = z[i] - params.intercept;

    // In-sample residuals under the conditioning convention, then zero
    // residuals over the forecast span.
    std::vector<double> eps(z.size(), 0.0);
    const std::ptrdiff_t t0 = o.p + o.P * o.S;
    for (std::ptrdiff_t t = t0; t < n; ++t)
        eps[t] = zc[t] - predict_centered(params, zc, eps, t);

    std::vector<double> zhat(k);
    for (int h = 0; h < k; ++h) {
        const double pred = predict_centered(params, zc, eps, n + h);
        zc[n + h] = pred;
        zhat[h] = pred + params.intercept;
    }

    const int tail_len = o.d + o.D * o.S;
    const std::vector<double> tail(history.values.end() - tail_len, history.values.end());
    DayForecast fc;
    fc.model_id = "sarima";
    fc.origin_day = history.num_days() - 1;
    fc.target_day = history.num_days();
    fc.values = undifference(zhat, tail, o.d, o.D, o.S);
    return fc;
}

}  // namespace lf
