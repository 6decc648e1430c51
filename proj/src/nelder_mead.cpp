#include "lf/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lf/errors.hpp"

namespace lf {

namespace {

void clamp_point(std::vector<double>& x, const NelderMeadOptions& opt) {
    if (!opt.lower.empty())
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(x[i], opt.lower[i]);
    if (!opt.upper.empty())
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(x[i], opt.upper[i]);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& opt) {
    const std::size_t dim = start.size();
    if (dim == 0) throw Error(ErrorKind::validation, "nelder_mead needs at least one dimension");

    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    clamp_point(start, opt);
    std::vector<std::vector<double>> x(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i + 1][i] += start[i] != 0.0 ? opt.initial_step * std::abs(start[i]) + opt.initial_step
                                       : opt.initial_step;
        clamp_point(x[i + 1], opt);
    }
    std::vector<double> fx(dim + 1);
    auto safe_eval = [&](const std::vector<double>& p) {
        const double v = objective(p);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    for (std::size_t i = 0; i <= dim; ++i) fx[i] = safe_eval(x[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(dim + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> x2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t k = 0; k <= dim; ++k) {
            x2[k] = std::move(x[idx[k]]);
            f2[k] = fx[idx[k]];
        }
        x = std::move(x2);
        fx = std::move(f2);
    };

    NelderMeadResult result;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        order();

        double size = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            double dist = 0.0;
            for (std::size_t j = 0; j < dim; ++j) dist += (x[i][j] - x[0][j]) * (x[i][j] - x[0][j]);
            size = std::max(size, std::sqrt(dist));
        }
        const double fspread = fx[dim] - fx[0];
        if (size <= opt.simplex_tolerance || fspread <= 1e-12 * (1.0 + std::abs(fx[0]))) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += x[i][j] / static_cast<double>(dim);

        auto along = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t j = 0; j < dim; ++j) p[j] = centroid[j] + coef * (centroid[j] - x[dim][j]);
            clamp_point(p, opt);
            return p;
        };

        const std::vector<double> xr = along(kReflect);
        const double fr = safe_eval(xr);
        if (fr < fx[0]) {
            const std::vector<double> xe = along(kExpand);
            const double fe = safe_eval(xe);
            if (fe < fr) {
                x[dim] = xe;
                fx[dim] = fe;
            } else {
                x[dim] = xr;
                fx[dim] = fr;
            }
        } else if (fr < fx[dim - 1]) {
            x[dim] = xr;
            fx[dim] = fr;
        } else {
            const bool outside = fr < fx[dim];
            const std::vector<double> xc = outside ? along(kContract) : along(-kContract);
            const double fc = safe_eval(xc);
            if (fc < (outside ? fr : fx[dim])) {
                x[dim] = xc;
                fx[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        x[i][j] = x[0][j] + kShrink * (x[i][j] - x[0][j]);
                    clamp_point(x[i], opt);
                    fx[i] = safe_eval(x[i]);
                }
            }
        }
    }
    order();
    result.x = x[0];
    result.value = fx[0];
    result.iterations = iter;
    return result;
}

}  // namespace lf
