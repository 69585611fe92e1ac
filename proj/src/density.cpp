#include "gramstat/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gramstat/errors.hpp"
#include "gramstat/quadrature.hpp"
#include "gramstat/special_functions.hpp"

namespace gramstat {

namespace {

// The delta coefficients are alternating sums whose terms reach ~1e13 while
// the results are O(1e-4) near K = 45. Terms are built by 80-bit recurrences
// (factorials, Gamma(nu+j+1), powers of 1/c) and summed with Neumaier
// compensation in descending magnitude order, keeping the cancellation noise
// at the long-double floor instead of the double one.
long double neumaier_sorted(std::vector<long double>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](long double x, long double y) { return std::fabs(x) > std::fabs(y); });
    long double sum = 0.0L;
    long double comp = 0.0L;
    for (long double t : terms) {
        const long double next = sum + t;
        if (std::fabs(sum) >= std::fabs(t)) {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    return sum + comp;
}

struct FitTables {
    std::vector<long double> fact;      // j!
    std::vector<long double> gamma_nu;  // Gamma(nu + j + 1)
    std::vector<long double> inv_c_pow; // c^-j
};

FitTables build_tables(double nu, double c, int K) {
    FitTables t;
    t.fact.resize(static_cast<std::size_t>(K) + 1);
    t.gamma_nu.resize(static_cast<std::size_t>(K) + 1);
    t.inv_c_pow.resize(static_cast<std::size_t>(K) + 1);
    t.fact[0] = 1.0L;
    t.gamma_nu[0] = std::exp(static_cast<long double>(log_gamma(nu + 1.0)));
    t.inv_c_pow[0] = 1.0L;
    const long double inv_c = 1.0L / static_cast<long double>(c);
    for (int j = 1; j <= K; ++j) {
        const auto s = static_cast<std::size_t>(j);
        t.fact[s] = t.fact[s - 1] * static_cast<long double>(j);
        t.gamma_nu[s] = t.gamma_nu[s - 1] * (static_cast<long double>(nu) + j);
        t.inv_c_pow[s] = t.inv_c_pow[s - 1] * inv_c;
    }
    return t;
}

std::vector<double> compute_delta(const MomentTable& moments, int K, const FitTables& t) {
    std::vector<long double> mu(static_cast<std::size_t>(K) + 1);
    for (int j = 0; j <= K; ++j) {
        mu[static_cast<std::size_t>(j)] = static_cast<long double>(moments.at(j));
    }
    std::vector<double> delta(static_cast<std::size_t>(K) + 1);
    std::vector<long double> terms;
    for (int i = 0; i <= K; ++i) {
        terms.clear();
        for (int k = 0; k <= i; ++k) {
            const auto ik = static_cast<std::size_t>(i - k);
            long double term = t.inv_c_pow[ik] * t.fact[static_cast<std::size_t>(i)] /
                               (t.fact[static_cast<std::size_t>(k)] * t.fact[ik] * t.gamma_nu[ik]) *
                               mu[ik];
            if (k & 1) term = -term;
            terms.push_back(term);
        }
        delta[static_cast<std::size_t>(i)] = static_cast<double>(neumaier_sorted(terms));
    }
    return delta;
}

}  // namespace

DensityModel fit_density(const MomentTable& moments, int K) {
    if (K < 0) throw std::domain_error("fit_density: K must be nonnegative");
    for (int p = 0; p <= std::max(K, 2); ++p) {
        if (!moments.contains(p)) {
            throw std::invalid_argument("fit_density: missing moment of order " +
                                        std::to_string(p));
        }
    }
    const double mu1 = moments.at(1);
    const double mu2 = moments.at(2);
    const double variance = mu2 - mu1 * mu1;
    if (!(variance > 0.0)) {
        throw std::invalid_argument("fit_density: degenerate moments, mu(2) <= mu(1)^2");
    }
    const double c = variance / mu1;
    const double nu = mu1 / c - 1.0;
    if (!(nu > -1.0)) {
        throw std::invalid_argument("fit_density: shape nu <= -1, moments not a positive density");
    }

    const FitTables tables = build_tables(nu, c, K);
    std::vector<double> delta = compute_delta(moments, K, tables);
    return DensityModel(c, nu, std::move(delta), moments);
}

double laguerre_eval(double nu, int i, double x) {
    if (!(nu > -1.0)) throw std::domain_error("laguerre_eval: nu must exceed -1");
    if (i < 0) throw std::domain_error("laguerre_eval: order must be nonnegative");
    // L_0 = 1, L_1 = x - nu - 1, and
    // (n+1) L_{n+1} = (x - 2n - 1 - nu) L_n - (n + nu) L_{n-1}.
    double prev = 1.0;
    if (i == 0) return prev;
    double cur = x - nu - 1.0;
    for (int n = 1; n < i; ++n) {
        const double next =
            ((x - 2.0 * n - 1.0 - nu) * cur - (n + nu) * prev) / static_cast<double>(n + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

double approx_pdf(const DensityModel& model, double lambda) {
    if (lambda < 0.0) throw std::domain_error("approx_pdf: lambda must be nonnegative");
    const double c = model.scale();
    const double nu = model.shape();
    const double x = lambda / c;
    const int K = model.truncation_order();
    const auto& delta = model.coefficients();

    const double weight = std::pow(lambda, nu) * std::exp(-x) / std::pow(c, nu + 1.0);
    if (weight == 0.0) return 0.0;  // far tail; the polynomial cannot resurrect it

    // Single recurrence pass accumulates sum_i delta_i L_i(nu, x).
    double prev = 1.0;
    double series = delta[0];
    if (K >= 1) {
        double cur = x - nu - 1.0;
        series += delta[1] * cur;
        for (int n = 1; n < K; ++n) {
            const double next =
                ((x - 2.0 * n - 1.0 - nu) * cur - (n + nu) * prev) / static_cast<double>(n + 1);
            prev = cur;
            cur = next;
            series += delta[static_cast<std::size_t>(n) + 1] * cur;
        }
    }
    return weight * series;
}

double approx_cdf(const DensityModel& model, double lambda) {
    if (lambda < 0.0) throw std::domain_error("approx_cdf: lambda must be nonnegative");
    if (lambda == 0.0) return 0.0;
    const double x = lambda / model.scale();
    const double nu = model.shape();
    const int K = model.truncation_order();
    const auto& delta = model.coefficients();

    // Term-by-term antiderivative via the Laguerre lowering identity
    //   int_0^x u^nu e^-u L_i(nu, u) du = -(1/i) x^(nu+1) e^-x L_{i-1}(nu+1, x)
    // for i >= 1, which keeps every term at the same O(1) scale as the PDF.
    // Expanding the incomplete-gamma basis instead produces coefficients of
    // size Gamma(nu+K+1)/(K/2)!^2 (~1e12 at K = 45) that amplify the last
    // few ulps of each gamma evaluation into visible CDF noise.
    const double base =
        delta[0] * std::exp(log_gamma(nu + 1.0)) * regularized_lower_gamma(nu + 1.0, x);
    const double weight = std::pow(x, nu + 1.0) * std::exp(-x);
    if (K == 0 || weight == 0.0) return base;

    const double alpha = nu + 1.0;
    double correction = 0.0;
    double comp = 0.0;
    double lag_prev = 1.0;             // order 0 at parameter nu+1
    double lag_cur = x - alpha - 1.0;  // order 1
    for (int i = 1; i <= K; ++i) {
        const double lag = (i == 1) ? lag_prev : lag_cur;  // order i-1
        const double term = delta[static_cast<std::size_t>(i)] / static_cast<double>(i) * lag;
        const double next = correction + term;
        if (std::abs(correction) >= std::abs(term)) {
            comp += (correction - next) + term;
        } else {
            comp += (term - next) + correction;
        }
        correction = next;
        if (i >= 2 && i < K) {
            const int n = i - 1;  // advance order i-1 -> i for the next round
            const double lag_next =
                ((x - 2.0 * n - 1.0 - alpha) * lag_cur - (n + alpha) * lag_prev) /
                static_cast<double>(n + 1);
            lag_prev = lag_cur;
            lag_cur = lag_next;
        }
    }
    return base - weight * (correction + comp);
}

double expected_functional(const DensityModel& model, const std::function<double(double)>& g,
                           double upper) {
    if (!(upper > 0.0)) throw std::domain_error("expected_functional: upper must be positive");
    constexpr double rel_tol = 1e-8;
    const QuadratureResult r = integrate_adaptive(
        [&](double lambda) { return g(lambda) * approx_pdf(model, lambda); }, 0.0, upper, rel_tol);
    if (!r.converged) {
        const double achieved = std::abs(r.value) > 0.0 ? r.error_estimate / std::abs(r.value)
                                                        : r.error_estimate;
        throw quadrature_error("expected_functional: quadrature reached relative tolerance " +
                                   std::to_string(achieved) + " instead of the requested 1e-8",
                               achieved);
    }
    return r.value;
}

DensityEvaluation evaluate_on_grid(const DensityModel& model, std::vector<double> grid,
                                   double cdf_tolerance) {
    DensityEvaluation eval;
    eval.grid = std::move(grid);
    eval.pdf.reserve(eval.grid.size());
    eval.cdf.reserve(eval.grid.size());
    for (std::size_t i = 0; i < eval.grid.size(); ++i) {
        if (i > 0 && eval.grid[i] < eval.grid[i - 1]) {
            throw std::invalid_argument("evaluate_on_grid: grid must be ascending");
        }
        eval.pdf.push_back(approx_pdf(model, eval.grid[i]));
        eval.cdf.push_back(approx_cdf(model, eval.grid[i]));
    }
    for (std::size_t i = 0; i < eval.cdf.size(); ++i) {
        if (eval.cdf[i] < -cdf_tolerance || eval.cdf[i] > 1.0 + cdf_tolerance) {
            throw std::logic_error("evaluate_on_grid: cdf value " + std::to_string(eval.cdf[i]) +
                                   " outside [0, 1] beyond tolerance at lambda=" +
                                   std::to_string(eval.grid[i]));
        }
        if (i > 0 && eval.cdf[i] < eval.cdf[i - 1] - cdf_tolerance) {
            throw std::logic_error("evaluate_on_grid: cdf decreases beyond tolerance at lambda=" +
                                   std::to_string(eval.grid[i]));
        }
    }
    return eval;
}

std::vector<double> default_grid(const DensityModel& model, int points) {
    if (points < 2) throw std::domain_error("default_grid: need at least two points");
    const double hi = model.mean() + 10.0 * std::sqrt(model.variance());
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = hi * static_cast<double>(i) / (points - 1);
    }
    return grid;
}

double truncation_indicator(const DensityModel& model, const std::vector<double>& grid) {
    const int K = model.truncation_order();
    const double dK = model.coefficients().back();
    const double c = model.scale();
    const double nu = model.shape();
    double sup = 0.0;
    for (double lambda : grid) {
        const double x = lambda / c;
        const double w = std::pow(lambda, nu) * std::exp(-x) / std::pow(c, nu + 1.0);
        if (!std::isfinite(w) || w == 0.0) continue;  // endpoint of a nu < 0 weight
        sup = std::max(sup, std::abs(dK * laguerre_eval(nu, K, x) * w));
    }
    return sup;
}

}  // namespace gramstat
