#pragma once

namespace gramstat {

/// Natural log of the gamma function, x > 0. Lanczos rational approximation,
/// absolute error below 1e-13 over [1, 200].
double log_gamma(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s),
/// s > 0, x >= 0. Power series for x < s + 1, continued fraction otherwise.
double regularized_lower_gamma(double s, double x);

/// Rising factorial base * (base + 1) * ... * (base + p - 1), with the empty
/// product equal to 1. Computed as a direct product, never as a ratio of two
/// gamma evaluations, so integer arguments stay exact and do not overflow
/// prematurely. Throws std::overflow_error if the product leaves the
/// double range.
double gamma_ratio_rising(double base, int p);

/// n! as a double, n >= 0. Direct product; exact through n = 18.
double factorial(int n);

}  // namespace gramstat
