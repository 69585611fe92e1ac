#pragma once

#include <functional>
#include <vector>

#include "gramstat/stable.hpp"

namespace gramstat {

// Truncated Laguerre-series model of the marginal eigenvalue density:
// a gamma weight with scale c and shape nu, times a degree-K polynomial
// correction with coefficients delta_0 .. delta_K fitted from moments.
class DensityModel {
public:
    DensityModel(double c, double nu, std::vector<double> delta, MomentTable source)
        : c_(c), nu_(nu), delta_(std::move(delta)), source_moments_(std::move(source)) {}

    double scale() const { return c_; }
    double shape() const { return nu_; }
    const std::vector<double>& coefficients() const { return delta_; }
    int truncation_order() const { return static_cast<int>(delta_.size()) - 1; }
    const MomentTable& source_moments() const { return source_moments_; }

    double mean() const { return source_moments_.at(1); }
    double variance() const { return c_ * source_moments_.at(1); }

private:
    double c_;
    double nu_;
    std::vector<double> delta_;
    MomentTable source_moments_;
};

/// Fits scale, shape, and delta coefficients from moments 0..K. Throws on a
/// degenerate sequence (mu(2) <= mu(1)^2) or a missing order.
DensityModel fit_density(const MomentTable& moments, int K);

/// Sign-flipped generalized Laguerre polynomial of order i and parameter nu
/// (equal to (-1)^i times the classical generalized Laguerre polynomial),
/// evaluated by the three-term recurrence. Requires nu > -1.
double laguerre_eval(double nu, int i, double x);

/// Truncated-series density at lambda >= 0. Truncation can make this
/// slightly negative; values are returned unclipped.
double approx_pdf(const DensityModel& model, double lambda);

/// Truncated-series CDF at lambda >= 0; approx_cdf(model, 0) == 0.
double approx_cdf(const DensityModel& model, double lambda);

/// Integral of g against the model density over [0, upper] by adaptive
/// quadrature at relative tolerance 1e-8. Throws quadrature_error carrying
/// the achieved tolerance when the tolerance cannot be met.
double expected_functional(const DensityModel& model, const std::function<double(double)>& g,
                           double upper);

// A grid evaluation of the model with basic sanity enforcement on the CDF
// column. Truncation makes the CDF oscillate at the 1e-4..1e-2 scale on
// realistic spectra, so the default tolerance is 1e-2; violations beyond it
// throw.
struct DensityEvaluation {
    std::vector<double> grid;
    std::vector<double> pdf;
    std::vector<double> cdf;
};

DensityEvaluation evaluate_on_grid(const DensityModel& model, std::vector<double> grid,
                                   double cdf_tolerance = 1e-2);

/// 512 uniform points on [0, mean + 10 * sqrt(variance)].
std::vector<double> default_grid(const DensityModel& model, int points = 512);

/// Sup over the grid of the K-th term's contribution to the PDF: how much the
/// last retained order still moves the fit, i.e. the distance between the K
/// and K-1 truncations.
double truncation_indicator(const DensityModel& model, const std::vector<double>& grid);

}  // namespace gramstat
