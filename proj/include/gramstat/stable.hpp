#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "gramstat/spectrum.hpp"

namespace gramstat {

// Coefficients of the monic polynomial prod_i (X - beta_i), ascending
// exponent order, length q + 1, leading coefficient exactly 1.
struct MonicCoefficients {
    std::vector<double> a;

    int degree() const { return static_cast<int>(a.size()) - 1; }

    /// Horner evaluation.
    double evaluate(double x) const;

    /// Magnitude scale sum_j |a_j| x^(j-1) used to judge root residuals.
    double evaluation_scale(double x) const;
};

// Coefficients of the quotient Q(X) of degree tau - q with
// P(X) = Q(X) * prod_i (X - beta_i); the coefficient of X^(tau-q) is -1.
struct QuotientCoefficients {
    std::vector<double> b;  // ascending exponent order, length tau - q + 1
    int tau;
};

// Solution of Psi alpha = beta_tau: alpha_k = sum_l Psi^-1_{k,l} beta_l^tau,
// obtained without ever forming Psi^-1.
struct AlphaVector {
    std::vector<double> alpha;  // length q
    int tau;
};

enum class MomentEngine { stable, baseline, empirical };

// Positive moments mu_W(p) keyed by order, tagged with the producing engine.
class MomentTable {
public:
    explicit MomentTable(MomentEngine engine) : engine_(engine) {}

    void set(int p, double value);
    double at(int p) const;
    bool contains(int p) const { return moments_.count(p) != 0; }
    int max_order() const;
    MomentEngine engine() const { return engine_; }
    const std::map<int, double>& moments() const { return moments_; }

    /// Checks mu(0) = 1, positivity, and log-convexity
    /// mu(p) mu(p+2) >= mu(p+1)^2 over consecutive stored orders; throws on
    /// violation. A relative slack of 1e-12 absorbs rounding of the products.
    void check_invariants() const;

private:
    std::map<int, double> moments_;
    MomentEngine engine_;
};

/// Monic coefficients via iterative Vieta expansion, one root at a time in
/// ascending magnitude order.
MonicCoefficients monic_coefficients(const Spectrum& spectrum);

/// Back-substitution solve of the upper-triangular Toeplitz system for the
/// quotient coefficients. Requires tau >= q + 1; smaller exponents have
/// closed-form alpha vectors and never reach this solve.
QuotientCoefficients solve_quotient(const MonicCoefficients& a, int tau);

/// alpha_tau for any tau >= 0: unit vector for tau <= q-1, negated monic
/// coefficients for tau = q, and the quotient-convolution route for tau > q.
AlphaVector alpha_vector(const Spectrum& spectrum, const MonicCoefficients& a, int tau);

/// p-th moment of W through the Vandermonde-free route.
double stable_moment(const EnsembleConfig& config, int p);

/// Moments 0..p_max sharing one set of monic coefficients and one alpha
/// cache across all orders.
MomentTable stable_moments_upto(const EnsembleConfig& config, int p_max);

// Caching driver: monic coefficients are computed once, alpha vectors are
// memoized per tau (tau = p + k - 1 repeats across consecutive p).
// A single engine instance is meant for one thread; completed MomentTables
// are plain values and freely shareable.
class StableEngine {
public:
    explicit StableEngine(EnsembleConfig config);

    double moment(int p);
    MomentTable moments_upto(int p_max);

    const MonicCoefficients& monic() const { return monic_; }
    const AlphaVector& alpha(int tau);
    const EnsembleConfig& config() const { return config_; }

private:
    EnsembleConfig config_;
    MonicCoefficients monic_;
    std::unordered_map<int, AlphaVector> alpha_cache_;
};

}  // namespace gramstat
