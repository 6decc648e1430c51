#pragma once

#include <functional>
#include <vector>

namespace lf {

// Derivative-free simplex minimizer shared by the model fitters. Runs are
// deterministic: no randomness, stable ordering, and optional box clamping so
// smoothing factors stay inside their open intervals.
struct NelderMeadOptions {
    int max_iterations = 200;
    double simplex_tolerance = 1e-8;   // max vertex distance from the best vertex
    double initial_step = 0.1;         // per-coordinate simplex offset
    std::vector<double> lower;         // optional box, empty = unbounded
    std::vector<double> upper;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace lf
