#pragma once

#include <string>
#include <vector>

#include "lf/forecast.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// Seasonal ARIMA (p,d,q)(P,D,Q)S. Estimation is by conditional sum of
// squares: residuals before the conditioning start p + P·S, and pre-sample
// values, are taken as zero.
struct SarimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int S = kSamplesPerDay;

    int coeff_count() const { return p + q + P + Q; }
};

struct SarimaParams {
    SarimaOrder order;
    std::vector<double> ar;   // phi_1..phi_p
    std::vector<double> ma;   // theta_1..theta_q, convention (1 + theta B)
    std::vector<double> sar;  // seasonal Phi
    std::vector<double> sma;  // seasonal Theta
    double intercept = 0.0;   // mean of the differenced series
    double sigma2 = 0.0;      // innovation variance
    bool converged = true;
    std::vector<std::string> warnings;  // e.g. non-stationary coefficient flags
};

struct SarimaFitConfig {
    int max_iterations = 500;
    double tolerance = 1e-8;
    double initial_step = 0.1;
    // CSS over a year at S=96 is expensive; fitting uses only this many
    // trailing days when S == 96. Raise to disable.
    int s96_window_cap_days = 14;
};

// (1-B)^d (1-B^S)^D applied in that order; output length shrinks by d + D·S.
std::vector<double> difference(const std::vector<double>& values, int d, int D, int S);

// Inverse of `difference` for a forecast continuation. `tail` holds the last
// d + D·S original-scale values before the forecast span, oldest first.
std::vector<double> undifference(const std::vector<double>& diff_forecasts,
                                 const std::vector<double>& tail, int d, int D, int S);

// Conditional sum of squared one-step residuals on an already-differenced
// series. Non-finite intermediates yield +infinity so optimizers reject the
// point. The summation range starts at p + P·S.
double css_objective(const SarimaParams& params, const std::vector<double>& differenced);

// Nelder-Mead CSS minimization from zero coefficients (intercept from the
// differenced-series mean). Deterministic.
SarimaParams fit_sarima(const LoadSeries& series, const SarimaOrder& order,
                        const SarimaFitConfig& config = {});

// Gaussian CSS approximation: n·ln(css/n) + 2k, k counting the intercept.
double aic(double css_value, int n_eff, int k_params);

// Fits every candidate and returns the AIC minimizer; ties go to fewer
// coefficients, then earlier list position. Candidates that fail to fit are
// skipped; all failing is an error.
SarimaOrder select_order(const LoadSeries& series, const std::vector<SarimaOrder>& candidates,
                         const SarimaFitConfig& config = {});

// k-step forecast on the original scale: the SARMA recursion run with future
// residuals at zero, then undifferenced against the history tail.
DayForecast forecast_sarima(const SarimaParams& params, const LoadSeries& history,
                            int k = kSamplesPerDay);

}  // namespace lf
