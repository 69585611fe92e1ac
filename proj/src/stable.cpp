#include "gramstat/stable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gramstat/special_functions.hpp"

namespace gramstat {

namespace {

// Neumaier-compensated accumulator; alpha components alternate in sign for
// clustered spectra, so the k-sum in the moment formula is accumulated
// error-free-transformed.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value)) {
            comp += (sum - t) + value;
        } else {
            comp += (value - t) + sum;
        }
        sum = t;
    }

    double result() const { return sum + comp; }
};

}  // namespace

double MonicCoefficients::evaluate(double x) const {
    double r = 0.0;
    for (std::size_t j = a.size(); j-- > 0;) r = r * x + a[j];
    return r;
}

double MonicCoefficients::evaluation_scale(double x) const {
    double scale = 0.0;
    double power = 1.0;
    for (double coeff : a) {
        scale += std::abs(coeff) * power;
        power *= x;
    }
    return scale;
}

void MomentTable::set(int p, double value) {
    if (p < 0) throw std::domain_error("MomentTable: order must be nonnegative");
    moments_[p] = value;
}

double MomentTable::at(int p) const {
    const auto it = moments_.find(p);
    if (it == moments_.end()) {
        throw std::out_of_range("MomentTable: order " + std::to_string(p) + " not present");
    }
    return it->second;
}

int MomentTable::max_order() const {
    if (moments_.empty()) throw std::out_of_range("MomentTable: empty");
    return moments_.rbegin()->first;
}

void MomentTable::check_invariants() const {
    constexpr double slack = 1e-12;
    if (contains(0) && std::abs(at(0) - 1.0) > slack) {
        throw std::logic_error("MomentTable: mu(0) must equal 1");
    }
    for (const auto& [p, value] : moments_) {
        if (!(value > 0.0)) {
            throw std::logic_error("MomentTable: mu(" + std::to_string(p) + ") is not positive");
        }
    }
    // Cauchy-Schwarz for positive measures over consecutive stored orders.
    for (const auto& [p, value] : moments_) {
        if (!contains(p + 1) || !contains(p + 2)) continue;
        const double lhs = value * at(p + 2);
        const double rhs = at(p + 1) * at(p + 1);
        if (lhs < rhs * (1.0 - slack)) {
            throw std::logic_error("MomentTable: log-convexity violated at p=" + std::to_string(p));
        }
    }
}

MonicCoefficients monic_coefficients(const Spectrum& spectrum) {
    // Multiply out (X - beta_i) one root at a time; Spectrum is already
    // ascending, which is the insertion order with the best observed
    // floating behavior.
    std::vector<double> a{1.0};
    for (double root : spectrum.values()) {
        std::vector<double> next(a.size() + 1, 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            next[j + 1] += a[j];
            next[j] -= root * a[j];
        }
        a = std::move(next);
    }
    return MonicCoefficients{std::move(a)};
}

QuotientCoefficients solve_quotient(const MonicCoefficients& monic, int tau) {
    const int q = monic.degree();
    if (tau < q + 1) {
        throw std::domain_error("solve_quotient: requires tau >= q + 1, got tau=" +
                                std::to_string(tau) + " for q=" + std::to_string(q));
    }
    const auto& a = monic.a;  // a[j] multiplies X^j, a[q] == 1
    const int n = tau - q;    // degree of Q

    // Row i of the Toeplitz system (1-indexed) is the coefficient of
    // X^(q+i-1) in Q(X) * prod(X - beta): zero for i <= tau - q, and -1 for
    // the X^tau row. The diagonal is a[q] = 1, so back-substitution from the
    // last row never divides.
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[static_cast<std::size_t>(n)] = -1.0;
    for (int m = n - 1; m >= 0; --m) {
        double s = 0.0;
        const int hi = std::min(n, m + q);
        for (int k = m + 1; k <= hi; ++k) {
            s += a[static_cast<std::size_t>(q + m - k)] * b[static_cast<std::size_t>(k)];
        }
        b[static_cast<std::size_t>(m)] = -s;
    }
    return QuotientCoefficients{std::move(b), tau};
}

AlphaVector alpha_vector(const Spectrum& spectrum, const MonicCoefficients& monic, int tau) {
    if (tau < 0) throw std::domain_error("alpha_vector: tau must be nonnegative");
    const int q = static_cast<int>(spectrum.size());
    std::vector<double> alpha(static_cast<std::size_t>(q), 0.0);

    if (tau <= q - 1) {
        // beta^tau is literally the (tau+1)-th column of Psi.
        alpha[static_cast<std::size_t>(tau)] = 1.0;
        return AlphaVector{std::move(alpha), tau};
    }
    if (tau == q) {
        // Degree-0 quotient Q = -1, so P(X) = -prod(X - beta_i).
        for (int j = 0; j < q; ++j) {
            alpha[static_cast<std::size_t>(j)] = -monic.a[static_cast<std::size_t>(j)];
        }
        return AlphaVector{std::move(alpha), tau};
    }

    const QuotientCoefficients quot = solve_quotient(monic, tau);
    const int n = tau - q;
    // alpha_j is the coefficient of X^(j-1) in Q(X) * prod(X - beta_i):
    // convolve b with a, out-of-range a treated as zero.
    for (int j = 0; j < q; ++j) {
        double s = 0.0;
        const int lo = std::max(0, j - q);
        const int hi = std::min(n, j);
        for (int k = lo; k <= hi; ++k) {
            s += quot.b[static_cast<std::size_t>(k)] * monic.a[static_cast<std::size_t>(j - k)];
        }
        alpha[static_cast<std::size_t>(j)] = s;
    }
    return AlphaVector{std::move(alpha), tau};
}

StableEngine::StableEngine(EnsembleConfig config)
    : config_(std::move(config)), monic_(monic_coefficients(config_.spectrum)) {}

const AlphaVector& StableEngine::alpha(int tau) {
    const auto it = alpha_cache_.find(tau);
    if (it != alpha_cache_.end()) return it->second;
    return alpha_cache_.emplace(tau, alpha_vector(config_.spectrum, monic_, tau)).first->second;
}

double StableEngine::moment(int p) {
    if (p < 0) throw std::domain_error("stable_moment: p must be nonnegative");
    const int q = config_.q;
    const int n_t = config_.n_t;

    CompensatedSum acc;
    for (int k = q - n_t + 1; k <= q; ++k) {
        const double ratio = gamma_ratio_rising(static_cast<double>(n_t - q + k), p);
        const AlphaVector& av = alpha(p + k - 1);
        acc.add(ratio * av.alpha[static_cast<std::size_t>(k - 1)]);
    }
    const double value = acc.result() / static_cast<double>(n_t);
    if (!std::isfinite(value)) {
        throw std::overflow_error("stable_moment: overflow at p=" + std::to_string(p));
    }
    return value;
}

MomentTable StableEngine::moments_upto(int p_max) {
    if (p_max < 0) throw std::domain_error("stable_moments_upto: p_max must be nonnegative");
    MomentTable table(MomentEngine::stable);
    for (int p = 0; p <= p_max; ++p) {
        table.set(p, moment(p));  // overflow surfaces with the offending p in the message
    }
    return table;
}

double stable_moment(const EnsembleConfig& config, int p) {
    StableEngine engine(config);
    return engine.moment(p);
}

MomentTable stable_moments_upto(const EnsembleConfig& config, int p_max) {
    StableEngine engine(config);
    return engine.moments_upto(p_max);
}

}  // namespace gramstat
