#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gramstat/baseline.hpp"
#include "gramstat/stable.hpp"
#include "oracles.hpp"

using namespace gramstat;

namespace {

EnsembleConfig config1() { return validate_ensemble(3, 5, exponential_spectrum(5, 0.85)); }
EnsembleConfig config2() { return validate_ensemble(3, 20, exponential_spectrum(20, 0.85)); }

double vandermonde_apply(const Spectrum& s, const std::vector<double>& alpha, std::size_t row) {
    double acc = 0.0;
    double power = 1.0;
    for (double a : alpha) {
        acc += a * power;
        power *= s[row];
    }
    return acc;
}

}  // namespace

TEST_CASE("monic coefficients, hand-expanded cases") {
    const MonicCoefficients one = monic_coefficients(Spectrum({1.0}));
    REQUIRE(one.a.size() == 2);
    CHECK(one.a[0] == -1.0);
    CHECK(one.a[1] == 1.0);

    // (X-1)(X-2)(X-4) = X^3 - 7X^2 + 14X - 8
    const MonicCoefficients three = monic_coefficients(Spectrum({1.0, 2.0, 4.0}));
    REQUIRE(three.a.size() == 4);
    CHECK(three.a[0] == doctest::Approx(-8.0).epsilon(1e-15));
    CHECK(three.a[1] == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(three.a[2] == doctest::Approx(-7.0).epsilon(1e-15));
    CHECK(three.a[3] == 1.0);
}

TEST_CASE("monic coefficient invariants on a clustered spectrum") {
    const Spectrum s = exponential_spectrum(5, 0.85);
    const MonicCoefficients monic = monic_coefficients(s);
    CHECK(monic.a.back() == 1.0);
    // sign of the constant term is (-1)^q
    CHECK(monic.a.front() * std::pow(-1.0, 5) > 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double residual = std::abs(monic.evaluate(s[i]));
        CHECK(residual <= 1e-10 * monic.evaluation_scale(s[i]));
    }
}

TEST_CASE("monic root residual, randomized spectra") {
    oracles::Rng rng{0xB0075u};
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum s(oracles::random_spectrum_values(rng, 8, 0.05));
        const MonicCoefficients monic = monic_coefficients(s);
        CHECK(monic.a.back() == 1.0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(std::abs(monic.evaluate(s[i])) <= 1e-10 * monic.evaluation_scale(s[i]));
        }
    }
}

TEST_CASE("solve_quotient, small hand cases") {
    // q=1, spectrum {1}: -X^2 = Q(X)(X-1) + alpha part, Q = -X - 1
    const MonicCoefficients monic = monic_coefficients(Spectrum({1.0}));
    const QuotientCoefficients q2 = solve_quotient(monic, 2);
    REQUIRE(q2.b.size() == 2);
    CHECK(q2.b[0] == -1.0);
    CHECK(q2.b[1] == -1.0);

    // tau = q + 1 generally: b = [a_q, -1]
    const MonicCoefficients m3 = monic_coefficients(Spectrum({1.0, 2.0, 4.0}));
    const QuotientCoefficients q4 = solve_quotient(m3, 4);
    REQUIRE(q4.b.size() == 2);
    CHECK(q4.b[0] == doctest::Approx(m3.a[2]).epsilon(1e-15));  // a_q = -7
    CHECK(q4.b[1] == -1.0);

    CHECK_THROWS_AS(solve_quotient(m3, 3), std::domain_error);  // tau = q out of contract
}

TEST_CASE("quotient leading coefficient is always -1") {
    oracles::Rng rng{0xC0FFEEu};
    for (int trial = 0; trial < 20; ++trial) {
        const Spectrum s(oracles::random_spectrum_values(rng, 6, 0.05));
        const MonicCoefficients monic = monic_coefficients(s);
        const int q = static_cast<int>(s.size());
        for (int tau = q + 1; tau <= q + 9; ++tau) {
            CHECK(solve_quotient(monic, tau).b.back() == -1.0);
        }
    }
}

TEST_CASE("alpha vector, all three branches on {1,2,4}") {
    const Spectrum s({1.0, 2.0, 4.0});
    const MonicCoefficients monic = monic_coefficients(s);

    // tau <= q-1: unit vector picking the Vandermonde column
    const AlphaVector a2 = alpha_vector(s, monic, 2);
    CHECK(a2.alpha == std::vector<double>{0.0, 0.0, 1.0});

    // tau = q: negated monic coefficients, cross-checked via Psi alpha = beta^3
    const AlphaVector a3 = alpha_vector(s, monic, 3);
    CHECK(a3.alpha[0] == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(a3.alpha[1] == doctest::Approx(-14.0).epsilon(1e-14));
    CHECK(a3.alpha[2] == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(vandermonde_apply(s, a3.alpha, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vandermonde_apply(s, a3.alpha, 1) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(vandermonde_apply(s, a3.alpha, 2) == doctest::Approx(64.0).epsilon(1e-12));

    // tau > q: quotient route against an independent long-double dense solve
    const AlphaVector a4 = alpha_vector(s, monic, 4);
    const std::vector<double> reference = oracles::solve_vandermonde(s.values(), 4);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a4.alpha[i] == doctest::Approx(reference[i]).epsilon(1e-12));
    }
    CHECK(vandermonde_apply(s, a4.alpha, 1) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(vandermonde_apply(s, a4.alpha, 2) == doctest::Approx(256.0).epsilon(1e-12));
}

TEST_CASE("residual property: Psi alpha = beta^tau across random spectra") {
    oracles::Rng rng{0x51AB1Eu};
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum s(oracles::random_spectrum_values(rng, 8, 0.05));
        const MonicCoefficients monic = monic_coefficients(s);
        for (int tau = 0; tau <= 30; ++tau) {
            const AlphaVector av = alpha_vector(s, monic, tau);
            double worst = 0.0;
            double scale = 0.0;
            for (std::size_t row = 0; row < s.size(); ++row) {
                const double target = std::pow(s[row], tau);
                worst = std::max(worst, std::abs(vandermonde_apply(s, av.alpha, row) - target));
                scale = std::max(scale, std::abs(target));
            }
            CHECK(worst <= 1e-8 * scale);
        }
    }
}

TEST_CASE("polynomial reconstruction: spectrum points are roots of P") {
    const Spectrum s = exponential_spectrum(6, 0.8);
    const MonicCoefficients monic = monic_coefficients(s);
    const int q = static_cast<int>(s.size());
    for (int tau = q + 1; tau <= 25; ++tau) {
        const AlphaVector av = alpha_vector(s, monic, tau);
        for (std::size_t row = 0; row < s.size(); ++row) {
            const double x_tau = std::pow(s[row], tau);
            const double p_value = vandermonde_apply(s, av.alpha, row) - x_tau;
            // relative to the evaluation scale of P at this point; the raw
            // monomial beta^tau underflows the coefficient noise floor for
            // the smallest roots at large tau
            double scale = std::abs(x_tau);
            double power = 1.0;
            for (double a : av.alpha) {
                scale += std::abs(a) * power;
                power *= s[row];
            }
            CHECK(std::abs(p_value) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("stable moment hand example: n_t=2, q=3, {1,2,4}") {
    const EnsembleConfig config = validate_ensemble(2, 3, Spectrum({1.0, 2.0, 4.0}));
    // mu(1) = (1/2)(1*alpha_{2,2} + 2*alpha_{3,3}) = (1/2)(0 + 14) = 7 = tr Lambda
    CHECK(stable_moment(config, 1) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("stable moments reproduce the golden values") {
    StableEngine engine1(config1());
    CHECK(engine1.moment(1) == doctest::Approx(0.5562946875).epsilon(1e-12));
    CHECK(std::abs(engine1.moment(1) - 0.5562) <= 1e-4);
    CHECK(std::abs(engine1.moment(5) - 1.1032) <= 1e-4);
    CHECK(std::abs(engine1.moment(8) - 5.3989) <= 1e-4);

    StableEngine engine2(config2());
    CHECK(std::abs(engine2.moment(1) - 0.9612) <= 1e-4);
    CHECK(std::abs(engine2.moment(5) - 4.7562) <= 1e-4);
    CHECK(std::abs(engine2.moment(8) - 37.47) <= 1e-2);
}

TEST_CASE("normalization: p = 0 is exactly one") {
    CHECK(stable_moment(config1(), 0) == 1.0);
    CHECK(stable_moment(config2(), 0) == 1.0);
    CHECK(stable_moment(validate_ensemble(1, 1, Spectrum({3.0})), 0) == 1.0);
}

TEST_CASE("trace identity on randomized configs") {
    oracles::Rng rng{0x7EAC3u};
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum s(oracles::random_spectrum_values(rng, 8, 0.05));
        const int q = static_cast<int>(s.size());
        const int n_t = rng.uniform_int(1, q);
        const EnsembleConfig config = validate_ensemble(n_t, q, s);
        CHECK(stable_moment(config, 1) == doctest::Approx(s.sum()).epsilon(1e-10));
    }
    // including the configuration where the baseline breaks down
    CHECK(stable_moment(config2(), 1) ==
          doctest::Approx(1.0 - std::pow(0.85, 20)).epsilon(1e-10));
}

TEST_CASE("engine equivalence against the baseline where it is trustworthy") {
    oracles::Rng rng{0xE091Eu};
    int accepted = 0;
    while (accepted < 25) {
        const Spectrum s(oracles::random_spectrum_values(rng, 8, 0.05));
        const int q = static_cast<int>(s.size());
        const int n_t = rng.uniform_int(1, q);
        const EnsembleConfig config = validate_ensemble(n_t, q, s);
        const BaselineEngine baseline(config);
        if (baseline.system().condition_estimate >= 1e8) continue;
        ++accepted;
        StableEngine stable(config);
        for (int p = 0; p <= 10; ++p) {
            const double b = baseline.moment(p);
            CHECK(std::abs(stable.moment(p) - b) <= 1e-8 * std::abs(b));
        }
    }
}

TEST_CASE("moment table: batch driver and invariants") {
    const MomentTable table = stable_moments_upto(config1(), 8);
    CHECK(table.engine() == MomentEngine::stable);
    CHECK(table.at(0) == 1.0);
    CHECK(table.at(1) == doctest::Approx(0.5562946875).epsilon(1e-12));
    CHECK(table.max_order() == 8);
    table.check_invariants();  // positivity + log-convexity

    const MomentTable tiny = stable_moments_upto(config1(), 0);
    CHECK(tiny.at(0) == 1.0);
    CHECK(tiny.max_order() == 0);

    const MomentTable big = stable_moments_upto(config2(), 20);
    big.check_invariants();
}

TEST_CASE("moment table invariant violations throw") {
    MomentTable bad(MomentEngine::stable);
    bad.set(0, 1.0);
    bad.set(1, -2.0);
    CHECK_THROWS_AS(bad.check_invariants(), std::logic_error);

    MomentTable nonconvex(MomentEngine::stable);
    nonconvex.set(0, 1.0);
    nonconvex.set(1, 10.0);
    nonconvex.set(2, 1.0);  // mu0*mu2 < mu1^2
    CHECK_THROWS_AS(nonconvex.check_invariants(), std::logic_error);
}

TEST_CASE("overflow is reported, not returned") {
    const EnsembleConfig config = validate_ensemble(1, 2, Spectrum({50.0, 100.0}));
    CHECK_THROWS_AS(stable_moment(config, 200), std::overflow_error);
    CHECK_THROWS_AS(stable_moments_upto(config, 200), std::overflow_error);
}

TEST_CASE("alpha cache reuse does not change results") {
    StableEngine engine(config1());
    const double first = engine.moment(5);
    const double again = engine.moment(5);
    CHECK(first == again);
    const MomentTable table = engine.moments_upto(8);
    CHECK(table.at(5) == first);
}
