#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gramstat/density.hpp"
#include "gramstat/spectrum.hpp"

namespace gramstat {

// Seeded empirical draw of the ensemble: n_samples realizations of W, each
// contributing its n_t eigenvalues in ascending order. Deterministic given
// (config, n_samples, seed); per-realization RNG streams are derived from
// (seed, realization index), so the draw order never depends on scheduling.
class EmpiricalSample {
public:
    EmpiricalSample(std::vector<double> eigenvalues, std::int64_t n_samples, int n_t,
                    std::uint64_t seed, std::optional<EnsembleConfig> config);

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& sorted_eigenvalues() const { return sorted_; }
    std::int64_t n_samples() const { return n_samples_; }
    int n_t() const { return n_t_; }
    std::uint64_t seed() const { return seed_; }

    /// Present for freshly drawn samples; imports carry only the data.
    const std::optional<EnsembleConfig>& config() const { return config_; }

private:
    std::vector<double> eigenvalues_;  // draw order
    std::vector<double> sorted_;
    std::int64_t n_samples_;
    int n_t_;
    std::uint64_t seed_;
    std::optional<EnsembleConfig> config_;
};

/// Draws X with i.i.d. CN(0,1) entries (real and imaginary parts are
/// independent N(0, 1/2)), forms H = Lambda^(1/2) X and W = H^H H, and
/// collects the eigenvalues of every realization.
EmpiricalSample sample_eigenvalues(const EnsembleConfig& config, std::int64_t n_samples,
                                   std::uint64_t seed);

struct MomentEstimate {
    double estimate;
    double standard_error;
};

/// Sample mean of lambda^p with its standard error
/// (sample sd / sqrt(n_samples * n_t)). p = 0 is exactly (1, 0).
MomentEstimate empirical_moment(const EmpiricalSample& sample, int p);

/// Fraction of stored eigenvalues <= lambda, by binary search.
double empirical_cdf(const EmpiricalSample& sample, double lambda);

/// Kolmogorov-Smirnov distance between the model CDF and the empirical CDF,
/// checking both one-sided step values at every sorted sample point.
double ks_distance(const DensityModel& model, const EmpiricalSample& sample);

// Export formats: a little-endian binary dump (24-byte header: 8-byte magic
// "GRAMSMP1", uint64 n_samples, uint64 n_t, then n_samples*n_t float64
// eigenvalues in draw order) and a realization,slot,eigenvalue CSV. Both
// re-import.
void export_binary(const EmpiricalSample& sample, const std::string& path);
void export_csv(const EmpiricalSample& sample, std::ostream& out);
void export_csv(const EmpiricalSample& sample, const std::string& path);
EmpiricalSample import_binary(const std::string& path);
EmpiricalSample import_csv(const std::string& path);

}  // namespace gramstat
