#include "gramstat/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gramstat/errors.hpp"
#include "gramstat/special_functions.hpp"

namespace gramstat {

namespace {

struct LuFactors {
    SquareMatrix lu;
    std::vector<std::size_t> perm;  // row permutation applied to the input
};

// Right-looking LU with partial pivoting, kept deliberately textbook: the
// point of this engine is the behavior of the classical dense solve.
LuFactors lu_factorize(const SquareMatrix& a) {
    const std::size_t n = a.n;
    LuFactors f{a, std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) {
            throw singular_matrix_error("Vandermonde factorization: zero pivot at column " +
                                        std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(pivot, j));
            std::swap(f.perm[k], f.perm[pivot]);
        }
        const double d = f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = f.lu(i, k) / d;
            f.lu(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) {
                f.lu(i, j) -= m * f.lu(k, j);
            }
        }
    }
    return f;
}

// Solve A x = e_col for one identity column.
std::vector<double> lu_solve_unit(const LuFactors& f, std::size_t col) {
    const std::size_t n = f.lu.n;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = (f.perm[i] == col) ? 1.0 : 0.0;
    }
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

double one_norm(const SquareMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < a.n; ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

double pow_int(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

VandermondeSystem build_vandermonde(const Spectrum& spectrum) {
    const std::size_t q = spectrum.size();
    VandermondeSystem sys;
    sys.psi = SquareMatrix(q);
    for (std::size_t m = 0; m < q; ++m) {
        double power = 1.0;
        for (std::size_t n = 0; n < q; ++n) {
            sys.psi(m, n) = power;
            power *= spectrum[m];
        }
    }

    const LuFactors f = lu_factorize(sys.psi);
    sys.inverse = SquareMatrix(q);
    for (std::size_t col = 0; col < q; ++col) {
        const std::vector<double> x = lu_solve_unit(f, col);
        for (std::size_t i = 0; i < q; ++i) sys.inverse(i, col) = x[i];
    }

    sys.condition_estimate = std::max(1.0, one_norm(sys.psi) * one_norm(sys.inverse));

    double resid = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < q; ++k) s += sys.psi(i, k) * sys.inverse(k, j);
            resid = std::max(resid, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    sys.inverse_residual = resid;
    return sys;
}

BaselineEngine::BaselineEngine(EnsembleConfig config)
    : config_(std::move(config)), system_(build_vandermonde(config_.spectrum)) {}

double BaselineEngine::moment(int p) const {
    if (p < 0) throw std::domain_error("BaselineEngine::moment: p must be nonnegative");
    const int q = config_.q;
    const int n_t = config_.n_t;
    const auto& beta = config_.spectrum.values();

    double total = 0.0;
    for (int k = q - n_t + 1; k <= q; ++k) {
        const double ratio = gamma_ratio_rising(static_cast<double>(n_t - q + k), p);
        double inner = 0.0;
        for (int l = 0; l < q; ++l) {
            inner += system_.inverse(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l)) *
                     std::pow(beta[static_cast<std::size_t>(l)], p + k - 1);
        }
        total += ratio * inner;
    }
    return total / static_cast<double>(n_t);
}

double BaselineEngine::pdf(double lambda) const {
    if (lambda < 0.0) throw std::domain_error("BaselineEngine::pdf: lambda must be nonnegative");
    const int q = config_.q;
    const int n_t = config_.n_t;
    const auto& beta = config_.spectrum.values();

    double total = 0.0;
    for (int l = 0; l < q; ++l) {
        const double b = beta[static_cast<std::size_t>(l)];
        const double expo = std::exp(-lambda / b);
        const double bpow = std::pow(b, q - n_t - 1);
        for (int k = q - n_t + 1; k <= q; ++k) {
            const int e = n_t + k - q - 1;  // >= 0 since k >= q - n_t + 1
            const double lam_pow = (e == 0) ? 1.0 : pow_int(lambda, e);
            total += lam_pow * expo * bpow / factorial(n_t - q + k - 1) *
                     system_.inverse(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l));
        }
    }
    return total / static_cast<double>(n_t);
}

double BaselineEngine::cdf(double lambda) const {
    if (lambda < 0.0) throw std::domain_error("BaselineEngine::cdf: lambda must be nonnegative");
    const int q = config_.q;
    const int n_t = config_.n_t;
    const auto& beta = config_.spectrum.values();

    double total = 0.0;
    for (int l = 0; l < q; ++l) {
        const double b = beta[static_cast<std::size_t>(l)];
        for (int k = q - n_t + 1; k <= q; ++k) {
            // gamma(n_t-q+k, lambda/b) / Gamma(n_t-q+k) is the regularized P.
            const double reg = regularized_lower_gamma(static_cast<double>(n_t - q + k), lambda / b);
            total += pow_int(b, k - 1) * reg *
                     system_.inverse(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l));
        }
    }
    return total / static_cast<double>(n_t);
}

}  // namespace gramstat
