#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lf/errors.hpp"
#include "lf/persistence.hpp"
#include "lf/rng.hpp"
#include "lf/sarima.hpp"
#include "lf/synth.hpp"

using namespace lf;

namespace {

std::vector<double> simulate_ar1(double phi, int n, std::uint64_t seed, double mean = 0.0) {
    SplitMix64 rng(seed);
    std::vector<double> z(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        prev = mean + phi * (prev - mean) + rng.next_normal();
        z[i] = prev;
    }
    return z;
}

// Integrated MA(1): first differences follow w_t = eps_t + theta*eps_{t-1}.
std::vector<double> simulate_ima1(double theta, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> x(n);
    double level = 100.0, prev_eps = 0.0;
    for (int i = 0; i < n; ++i) {
        const double eps = rng.next_normal();
        level += eps + theta * prev_eps;
        prev_eps = eps;
        x[i] = level;
    }
    return x;
}

LoadSeries as_series(std::vector<double> values) {
    LoadSeries s;
    s.start_epoch_s = 0;
    s.values = std::move(values);
    return s;
}

SarimaParams zero_params(const SarimaOrder& order, double intercept = 0.0) {
    SarimaParams m;
    m.order = order;
    m.ar.assign(order.p, 0.0);
    m.ma.assign(order.q, 0.0);
    m.sar.assign(order.P, 0.0);
    m.sma.assign(order.Q, 0.0);
    m.intercept = intercept;
    return m;
}

}  // namespace

TEST_CASE("first difference of a ramp is constant") {
    std::vector<double> ramp(20);
    std::iota(ramp.begin(), ramp.end(), 0.0);
    const std::vector<double> d = difference(ramp, 1, 0, 4);
    CHECK(d.size() == 19);
    for (double v : d) CHECK(v == 1.0);
}

TEST_CASE("seasonal difference kills an exactly periodic sequence") {
    std::vector<double> v;
    for (int i = 0; i < 24; ++i) v.push_back(static_cast<double>(i % 4) * 2.0 - 1.0);
    const std::vector<double> d = difference(v, 0, 1, 4);
    CHECK(d.size() == 20);
    for (double x : d) CHECK(x == 0.0);
}

TEST_CASE("combined differencing composes the single differences in either order") {
    // Integer-valued data keeps every subtraction exact, so both compositions
    // agree bit for bit.
    SplitMix64 rng(5);
    std::vector<double> v(60);
    for (double& x : v) x = std::floor(rng.next_uniform() * 100.0);
    const std::vector<double> combined = difference(v, 1, 1, 4);
    const std::vector<double> d_then_s = difference(difference(v, 1, 0, 4), 0, 1, 4);
    const std::vector<double> s_then_d = difference(difference(v, 0, 1, 4), 1, 0, 4);
    CHECK(combined == d_then_s);
    CHECK(combined == s_then_d);
}

TEST_CASE("difference length validation") {
    CHECK_THROWS_AS(difference(std::vector<double>(4, 1.0), 1, 1, 4), Error);
    CHECK_THROWS_AS(difference(std::vector<double>(3, 1.0), 0, 1, 4), Error);
}

TEST_CASE("undifference inverts difference over a forecast span") {
    SplitMix64 rng(9);
    std::vector<double> x(80);
    for (double& v : x) v = 10.0 + 3.0 * rng.next_normal();
    const int k = 12;
    for (int d = 0; d <= 1; ++d)
        for (int D = 0; D <= 1; ++D) {
            const int S = 5;
            const std::vector<double> z = difference(x, d, D, S);
            const std::vector<double> fut(z.end() - k, z.end());
            const int need = d + D * S;
            const std::vector<double> tail(x.end() - k - need, x.end() - k);
            const std::vector<double> rebuilt = undifference(fut, tail, d, D, S);
            REQUIRE(rebuilt.size() == static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                CHECK(std::abs(rebuilt[i] - x[x.size() - k + i]) < 1e-9);
        }
}

TEST_CASE("undifference basics") {
    const std::vector<double> f{1.0, 2.0, 3.0};
    CHECK(undifference(f, {}, 0, 0, 4) == f);
    const std::vector<double> one = undifference({0.5}, {10.0}, 1, 0, 4);
    CHECK(one.size() == 1);
    CHECK(one[0] == 10.5);
    CHECK_THROWS_AS(undifference(f, {1.0}, 1, 1, 4), Error);
}

TEST_CASE("null-model objective equals the centered sum of squares") {
    SplitMix64 rng(21);
    std::vector<double> z(300);
    for (double& v : z) v = rng.next_normal();
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
    double ref = 0.0;
    for (double v : z) ref += (v - mean) * (v - mean);

    SarimaOrder order;
    order.q = 1;  // one inert MA coefficient so the order stays legal
    order.S = 4;
    SarimaParams m = zero_params(order, mean);
    CHECK(std::abs(css_objective(m, z) - ref) < 1e-9 * ref);
}

TEST_CASE("objective prefers the generating AR coefficient") {
    const std::vector<double> z = simulate_ar1(0.8, 1500, 33);
    SarimaOrder order;
    order.p = 1;
    order.S = 4;
    SarimaParams at_truth = zero_params(order);
    at_truth.ar[0] = 0.8;
    const SarimaParams at_zero = zero_params(order);
    CHECK(css_objective(at_truth, z) < css_objective(at_zero, z));
    CHECK(css_objective(at_truth, z) == css_objective(at_truth, z));  // deterministic
}

TEST_CASE("fit recovers an AR(1) coefficient") {
    SarimaOrder order;
    order.p = 1;
    order.S = 4;
    const SarimaParams fit = fit_sarima(as_series(simulate_ar1(0.7, 2000, 41)), order);
    CHECK(fit.ar[0] > 0.6);
    CHECK(fit.ar[0] < 0.8);
    CHECK(fit.sigma2 > 0.5);
    CHECK(fit.sigma2 < 2.0);
}

TEST_CASE("fit recovers a differenced MA(1) coefficient") {
    SarimaOrder order;
    order.d = 1;
    order.q = 1;
    order.S = 4;
    const SarimaParams fit = fit_sarima(as_series(simulate_ima1(0.4, 2000, 43)), order);
    CHECK(fit.ma[0] > 0.25);
    CHECK(fit.ma[0] < 0.55);
}

TEST_CASE("white noise fits to a near-zero AR coefficient") {
    SplitMix64 rng(47);
    std::vector<double> z(2000);
    for (double& v : z) v = rng.next_normal();
    SarimaOrder order;
    order.p = 1;
    order.S = 4;
    const SarimaParams fit = fit_sarima(as_series(std::move(z)), order);
    CHECK(std::abs(fit.ar[0]) < 0.1);
}

TEST_CASE("fit is deterministic") {
    const std::vector<double> z = simulate_ar1(0.5, 600, 51);
    SarimaOrder order;
    order.p = 1;
    order.q = 1;
    order.S = 4;
    const SarimaParams a = fit_sarima(as_series(z), order);
    const SarimaParams b = fit_sarima(as_series(z), order);
    CHECK(a.ar == b.ar);
    CHECK(a.ma == b.ma);
    CHECK(a.intercept == b.intercept);
    CHECK(a.sigma2 == b.sigma2);
}

TEST_CASE("aic arithmetic") {
    CHECK(std::abs((aic(100.0, 50, 3) - aic(100.0, 50, 2)) - 2.0) < 1e-12);
    CHECK(std::abs((aic(100.0, 50, 2) - aic(50.0, 50, 2)) - 50.0 * std::log(2.0)) < 1e-9);
    CHECK_THROWS_AS(aic(0.0, 50, 2), Error);
    CHECK_THROWS_AS(aic(10.0, 2, 2), Error);
}

TEST_CASE("order selection rejects a structurally wrong candidate") {
    // An MA(1) cannot reproduce the geometric autocorrelation of an AR(1)
    // with phi = 0.6, so its residual sum of squares is worse by an amount
    // that grows with the sample; the pick is stable across seeds.
    SarimaOrder ar1;
    ar1.p = 1;
    ar1.S = 4;
    SarimaOrder ma1;
    ma1.q = 1;
    ma1.S = 4;
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        const SarimaOrder pick =
            select_order(as_series(simulate_ar1(0.6, 600, seed)), {ma1, ar1});
        CHECK(pick.p == 1);
    }
}

TEST_CASE("order selection usually resists an overfit nested candidate") {
    // AIC trades the extra coefficient against a fixed 2-point penalty, so a
    // spurious AR(2) term still wins occasionally by chance; across a batch
    // of seeds the parsimonious truth must dominate.
    SarimaOrder ar1;
    ar1.p = 1;
    ar1.S = 4;
    SarimaOrder ar2 = ar1;
    ar2.p = 2;
    int wins = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const SarimaOrder pick =
            select_order(as_series(simulate_ar1(0.6, 400, seed)), {ar1, ar2});
        if (pick.p == 1) ++wins;
    }
    CHECK(wins >= 14);
}

TEST_CASE("order selection: single candidate and exact ties") {
    const std::vector<double> z = simulate_ar1(0.5, 300, 61);
    SarimaOrder a;
    a.p = 1;
    a.S = 4;
    CHECK(select_order(as_series(z), {a}).S == 4);

    // Same model, different irrelevant S: identical AIC and coefficient
    // count, so the earlier candidate wins.
    SarimaOrder b = a;
    b.S = 8;
    CHECK(select_order(as_series(z), {a, b}).S == 4);
    CHECK(select_order(as_series(z), {b, a}).S == 8);
}

TEST_CASE("forecast with zero coefficients is flat at the intercept") {
    SarimaOrder order;
    order.q = 1;
    order.S = 4;
    SarimaParams m = zero_params(order, 2.5);
    const std::vector<double> hist(40, 7.0);
    const DayForecast f = forecast_sarima(m, as_series(hist), 6);
    CHECK(f.model_id == "sarima");
    for (double v : f.values) CHECK(v == 2.5);
}

TEST_CASE("random-walk forecast is flat at the last observation") {
    SplitMix64 rng(71);
    std::vector<double> x(50);
    double level = 5.0;
    for (double& v : x) v = (level += rng.next_normal());
    SarimaOrder order;
    order.d = 1;
    order.S = 4;
    const SarimaParams m = zero_params(order);
    const DayForecast f = forecast_sarima(m, as_series(x), 8);
    for (double v : f.values) CHECK(v == x.back());
}

TEST_CASE("seasonal random walk repeats the last season exactly") {
    SplitMix64 rng(73);
    std::vector<double> x(60);
    for (double& v : x) v = rng.next_uniform() * 10.0;
    SarimaOrder order;
    order.D = 1;
    order.S = 6;
    const SarimaParams m = zero_params(order);
    const DayForecast f = forecast_sarima(m, as_series(x), 6);
    for (int i = 0; i < 6; ++i) CHECK(f.values[i] == x[x.size() - 6 + i]);
}

TEST_CASE("weekly seasonal random walk equals one-week persistence") {
    SynthConfig cfg;
    cfg.n_buildings = 1;
    cfg.n_days = 21;
    cfg.noise_sd = 0.2;
    cfg.seed = 77;
    const LoadSeries s = generate(cfg).buildings[0];

    SarimaOrder order;
    order.D = 1;
    order.S = 7 * kSamplesPerDay;
    const SarimaParams m = zero_params(order);
    const DayForecast srw = forecast_sarima(m, s, kSamplesPerDay);
    const DayForecast pers = forecast_n_same_days(s, 1, s.num_days());
    CHECK(srw.values == pers.values);
}

TEST_CASE("fit precondition and order validation") {
    SarimaOrder no_coeffs;
    no_coeffs.d = 1;
    no_coeffs.S = 4;
    CHECK_THROWS_AS(fit_sarima(as_series(std::vector<double>(100, 1.0)), no_coeffs), Error);

    SarimaOrder order;
    order.p = 1;
    order.S = 4;
    CHECK_THROWS_AS(fit_sarima(as_series(std::vector<double>(5, 1.0)), order), Error);

    SarimaOrder bad;
    bad.p = -1;
    CHECK_THROWS_AS(fit_sarima(as_series(std::vector<double>(100, 1.0)), bad), Error);
}
