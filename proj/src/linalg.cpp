#include "lf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lf/errors.hpp"

namespace lf {

std::vector<double> cholesky_solve(Matrix a, std::vector<double> b, double pivot_floor) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n)
        throw Error(ErrorKind::shape, "cholesky_solve needs a square system");
    if (pivot_floor < 0.0) {
        // Rank deficiency shows up as a pivot at rounding-noise scale rather
        // than exactly zero; compare against the diagonal magnitude.
        double scale = 0.0;
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a.at(j, j)));
        pivot_floor = scale * n * 1e-14;
    }

    // A = L Lᵀ, lower triangle stored in place.
    for (int j = 0; j < n; ++j) {
        double diag = a.at(j, j);
        for (int k = 0; k < j; ++k) diag -= a.at(j, k) * a.at(j, k);
        if (!(diag > pivot_floor) || !std::isfinite(diag))
            throw Error(ErrorKind::singular,
                        "normal equations are singular at column " + std::to_string(j) +
                            "; refit with ridge > 0");
        const double l_jj = std::sqrt(diag);
        a.at(j, j) = l_jj;
        for (int i = j + 1; i < n; ++i) {
            double v = a.at(i, j);
            for (int k = 0; k < j; ++k) v -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = v / l_jj;
        }
    }

    // Forward solve L z = b, then back solve Lᵀ w = z.
    for (int i = 0; i < n; ++i) {
        double v = b[i];
        for (int k = 0; k < i; ++k) v -= a.at(i, k) * b[k];
        b[i] = v / a.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = b[i];
        for (int k = i + 1; k < n; ++k) v -= a.at(k, i) * b[k];
        b[i] = v / a.at(i, i);
    }
    return b;
}

std::vector<double> fit_ols(const Matrix& x, const std::vector<double>& y, double ridge) {
    if (x.rows < x.cols)
        throw Error(ErrorKind::shape, "least squares needs at least as many rows as columns");
    if (static_cast<int>(y.size()) != x.rows)
        throw Error(ErrorKind::shape, "target length does not match row count");
    if (ridge < 0.0) throw Error(ErrorKind::validation, "ridge must be >= 0");
    for (double v : x.data)
        if (!std::isfinite(v)) throw Error(ErrorKind::input, "design matrix must be finite");
    for (double v : y)
        if (!std::isfinite(v)) throw Error(ErrorKind::input, "targets must be finite");

    const int n = x.cols;
    Matrix xtx(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < x.rows; ++r) acc += x.at(r, i) * x.at(r, j);
            xtx.at(i, j) = acc;
            xtx.at(j, i) = acc;
        }
    for (int i = 0; i < n; ++i) xtx.at(i, i) += ridge;

    std::vector<double> xty(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int r = 0; r < x.rows; ++r) acc += x.at(r, i) * y[r];
        xty[i] = acc;
    }
    // With an explicit ridge the diagonal shift is the singularity guard; any
    // positive pivot is then acceptable.
    return cholesky_solve(std::move(xtx), std::move(xty), ridge > 0.0 ? 0.0 : -1.0);
}

}  // namespace lf
