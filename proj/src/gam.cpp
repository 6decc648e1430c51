#include "lf/gam.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "lf/errors.hpp"

namespace lf {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_config(const GamConfig& c) {
    for (const auto& [period, order] : c.fourier_orders) {
        if (period < 2)
            throw Error(ErrorKind::validation, "seasonality period must be at least 2 slots");
        if (order < 1)
            throw Error(ErrorKind::validation, "Fourier order must be at least 1");
    }
    for (std::size_t j = 1; j < c.changepoints.size(); ++j)
        if (c.changepoints[j] <= c.changepoints[j - 1])
            throw Error(ErrorKind::validation, "changepoints must be strictly increasing");
    if (c.ridge < 0.0)
        throw Error(ErrorKind::validation, "ridge must be non-negative");
}

int column_count(const GamConfig& c) {
    int n = 2 + static_cast<int>(c.changepoints.size());
    for (const auto& [period, order] : c.fourier_orders) n += 2 * order;
    return n + static_cast<int>(c.holidays.size());
}

// One design row for slot t. The Fourier angle is reduced modulo the period
// before evaluation, so columns repeat bit-exactly across periods.
void fill_row(std::int64_t t, const GamConfig& c, std::int64_t start_day_number, double* row) {
    int k = 0;
    row[k++] = 1.0;
    row[k++] = static_cast<double>(t);
    for (std::int64_t cp : c.changepoints)
        row[k++] = t > cp ? static_cast<double>(t - cp) : 0.0;
    for (const auto& [period, order] : c.fourier_orders) {
        const std::int64_t r = t % period;
        for (int n = 1; n <= order; ++n) {
            const double angle =
                kTwoPi * static_cast<double>((n * r) % period) / static_cast<double>(period);
            row[k++] = std::cos(angle);
            row[k++] = std::sin(angle);
        }
    }
    const std::int64_t day = start_day_number + t / kSamplesPerDay;
    for (const CivilDate& h : c.holidays) row[k++] = days_from_civil(h) == day ? 1.0 : 0.0;
}

// Flat coefficient vector in design-column order.
std::vector<double> flat_coefficients(const GamParams& p, const GamConfig& c) {
    if (p.slope_deltas.size() != c.changepoints.size() ||
        p.fourier_coeffs.size() != c.fourier_orders.size() ||
        p.holiday_effects.size() != c.holidays.size())
        throw Error(ErrorKind::shape, "parameters do not match the config layout");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(column_count(c)));
    w.push_back(p.intercept);
    w.push_back(p.slope);
    for (double d : p.slope_deltas) w.push_back(d);
    for (std::size_t s = 0; s < c.fourier_orders.size(); ++s) {
        if (static_cast<int>(p.fourier_coeffs[s].size()) != c.fourier_orders[s].second)
            throw Error(ErrorKind::shape, "Fourier coefficient count does not match the order");
        for (const auto& [a, b] : p.fourier_coeffs[s]) {
            w.push_back(a);
            w.push_back(b);
        }
    }
    for (double h : p.holiday_effects) w.push_back(h);
    return w;
}

}  // namespace

Matrix build_design_matrix(std::int64_t t_begin, std::int64_t t_end, const GamConfig& config,
                           CivilDate start_date) {
    check_config(config);
    if (t_begin < 0)
        throw Error(ErrorKind::input, "slot indices must be non-negative");
    if (t_end <= t_begin)
        throw Error(ErrorKind::input, "slot range is empty");
    const int rows = static_cast<int>(t_end - t_begin);
    const int cols = column_count(config);
    Matrix m(rows, cols);
    const std::int64_t day0 = days_from_civil(start_date);
    for (int r = 0; r < rows; ++r)
        fill_row(t_begin + r, config, day0, &m.data[static_cast<std::size_t>(r) * cols]);
    return m;
}

GamParams fit_gam(const LoadSeries& series, const GamConfig& config) {
    check_config(config);
    const std::int64_t n = static_cast<std::int64_t>(series.values.size());
    for (double v : series.values)
        if (!std::isfinite(v))
            throw Error(ErrorKind::input, "series contains missing samples; fill gaps first");
    for (std::int64_t cp : config.changepoints)
        if (cp <= 0 || cp >= n)
            throw Error(ErrorKind::validation,
                        "changepoint " + std::to_string(cp) +
                            " must lie strictly inside the training range of " +
                            std::to_string(n) + " slots");
    const int cols = column_count(config);
    if (n <= cols)
        throw Error(ErrorKind::history, "need more than " + std::to_string(cols) +
                                            " training samples, have " + std::to_string(n));

    const Matrix design = build_design_matrix(0, n, config, series.start_date());

    // Columns that never activate in the window (holidays outside it) would
    // make the normal equations singular; solve without them and report a
    // zero effect.
    std::vector<bool> used(static_cast<std::size_t>(cols), false);
    int n_used = 0;
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < design.rows; ++r)
            if (design.at(r, c) != 0.0) {
                used[static_cast<std::size_t>(c)] = true;
                ++n_used;
                break;
            }
    }
    Matrix reduced(design.rows, n_used);
    for (int r = 0; r < design.rows; ++r) {
        int k = 0;
        for (int c = 0; c < cols; ++c)
            if (used[static_cast<std::size_t>(c)]) reduced.at(r, k++) = design.at(r, c);
    }

    const std::vector<double> solution = fit_ols(reduced, series.values, config.ridge);

    std::vector<double> w(static_cast<std::size_t>(cols), 0.0);
    {
        int k = 0;
        for (int c = 0; c < cols; ++c)
            if (used[static_cast<std::size_t>(c)]) w[static_cast<std::size_t>(c)] = solution[k++];
    }

    double sse = 0.0;
    for (int r = 0; r < design.rows; ++r) {
        double pred = 0.0;
        for (int c = 0; c < cols; ++c) pred += design.at(r, c) * w[static_cast<std::size_t>(c)];
        const double e = series.values[static_cast<std::size_t>(r)] - pred;
        sse += e * e;
    }
    const std::int64_t dof = std::max<std::int64_t>(1, n - n_used);

    GamParams p;
    p.start_date = series.start_date();
    std::size_t k = 0;
    p.intercept = w[k++];
    p.slope = w[k++];
    for (std::size_t j = 0; j < config.changepoints.size(); ++j) p.slope_deltas.push_back(w[k++]);
    for (const auto& [period, order] : config.fourier_orders) {
        std::vector<std::pair<double, double>> pairs;
        for (int nn = 1; nn <= order; ++nn) {
            const double a = w[k++];
            const double b = w[k++];
            pairs.emplace_back(a, b);
        }
        p.fourier_coeffs.push_back(std::move(pairs));
    }
    for (std::size_t j = 0; j < config.holidays.size(); ++j) p.holiday_effects.push_back(w[k++]);
    p.noise_sd = std::sqrt(sse / static_cast<double>(dof));
    return p;
}

DayForecast forecast_gam(const GamParams& params, const GamConfig& config, int target_day) {
    check_config(config);
    if (target_day < 0)
        throw Error(ErrorKind::input, "target day must be non-negative");
    const std::vector<double> w = flat_coefficients(params, config);
    const int cols = column_count(config);
    std::vector<double> row(static_cast<std::size_t>(cols));
    const std::int64_t day0 = days_from_civil(params.start_date);

    DayForecast f;
    f.model_id = "gam_fourier";
    f.origin_day = target_day - 1;
    f.target_day = target_day;
    f.values.resize(kSamplesPerDay);
    for (int t = 0; t < kSamplesPerDay; ++t) {
        const std::int64_t slot =
            static_cast<std::int64_t>(target_day) * kSamplesPerDay + t;
        fill_row(slot, config, day0, row.data());
        double v = 0.0;
        for (int c = 0; c < cols; ++c) v += w[static_cast<std::size_t>(c)] * row[static_cast<std::size_t>(c)];
        f.values[static_cast<std::size_t>(t)] = v;
    }
    return f;
}

}  // namespace lf
