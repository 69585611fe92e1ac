#pragma once

#include <functional>

namespace gramstat {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b] to the given
/// relative tolerance. Bisects intervals whose local G7-vs-K15 discrepancy
/// exceeds their share of the budget, down to max_depth levels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int max_depth = 40);

}  // namespace gramstat
