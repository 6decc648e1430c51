#pragma once

#include <cstddef>
#include <vector>

namespace lf {

// Dense row-major matrix, just big enough for the regression design matrices
// used here (hundreds of rows, tens of columns).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Least squares: solves (XᵀX + ridge·I) w = Xᵀy by Cholesky decomposition.
// ridge = 0 requires full column rank; a rank-deficient system raises a
// singularity error advising ridge > 0.
std::vector<double> fit_ols(const Matrix& x, const std::vector<double>& y, double ridge = 0.0);

// Solves A w = b for symmetric positive definite A (row-major, n x n),
// in-place Cholesky. A pivot at or below `pivot_floor` raises a singularity
// error; the default (negative) picks a floor relative to the diagonal scale,
// 0.0 accepts any strictly positive pivot. Shared by fit_ols.
std::vector<double> cholesky_solve(Matrix a, std::vector<double> b, double pivot_floor = -1.0);

}  // namespace lf
