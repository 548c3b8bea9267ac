#pragma once

#include <cmath>
#include <functional>

namespace robustspline {

struct QuadratureResult {
    double value = 0.0;
    bool converged = true;
    long evaluations = 0;
};

/// Adaptive Simpson with Richardson correction. Recursion stops when the
/// local error estimate falls below the tolerance share of the subinterval,
/// or at max_depth (in which case converged is false).
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-10, int max_depth = 40);

} // namespace robustspline
