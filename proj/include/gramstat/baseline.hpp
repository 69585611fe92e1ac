#pragma once

#include <cstddef>
#include <vector>

#include "gramstat/spectrum.hpp"

namespace gramstat {

// Row-major dense square matrix, just large enough for the Vandermonde work.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// Condition estimates above this are reported as unstable: past 1e12 a double
// solve retains fewer than four significant digits.
inline constexpr double kConditionWarnThreshold = 1e12;

// The assembled Vandermonde system Psi_{m,n} = beta_m^{n-1} together with its
// explicitly computed inverse. The inverse is obtained by LU with partial
// pivoting against identity columns; the residual max|Psi Psi^-1 - I| is
// recorded rather than assumed small.
struct VandermondeSystem {
    SquareMatrix psi;
    SquareMatrix inverse;
    double condition_estimate = 1.0;  // one-norm estimate ||Psi||_1 * ||Psi^-1||_1
    double inverse_residual = 0.0;    // max-abs entry of Psi * inverse - I

    bool flagged_unstable() const { return condition_estimate > kConditionWarnThreshold; }
};

/// Builds Psi, its inverse, and the one-norm condition estimate. Throws
/// singular_matrix_error on an exactly zero pivot.
VandermondeSystem build_vandermonde(const Spectrum& spectrum);

// Closed-form marginal PDF/CDF/moments of an unordered eigenvalue of W,
// evaluated through the explicit Vandermonde inverse. This is the classical
// route: exact in exact arithmetic, and increasingly wrong as the spectrum
// clusters and the condition estimate grows. No attempt is made to
// stabilize it; that is the stable engine's job.
class BaselineEngine {
public:
    explicit BaselineEngine(EnsembleConfig config);

    /// p-th moment via the analytic sum over the inverse. For p = 0 the
    /// result is 1 up to rounding.
    double moment(int p) const;

    /// Marginal density at lambda >= 0.
    double pdf(double lambda) const;

    /// Marginal CDF at lambda >= 0.
    double cdf(double lambda) const;

    const VandermondeSystem& system() const { return system_; }
    const EnsembleConfig& config() const { return config_; }

    /// True when the condition estimate exceeds the warning threshold and
    /// results should be treated as unreliable.
    bool unstable() const { return system_.flagged_unstable(); }

private:
    EnsembleConfig config_;
    VandermondeSystem system_;
};

}  // namespace gramstat
