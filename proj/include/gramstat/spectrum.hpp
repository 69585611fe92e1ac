#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gramstat {

// Ordered distinct positive eigenvalues beta_1 < ... < beta_q of the
// correlation matrix. Construction sorts ascending and rejects non-finite,
// non-positive, or duplicate values (relative gap below 1e-14); the
// closed-form machinery downstream is undefined at coincident eigenvalues.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    double sum() const;
    double max() const { return values_.back(); }
    double min() const { return values_.front(); }

    bool operator==(const Spectrum&) const = default;

    static constexpr double kDuplicateRelTol = 1e-14;

private:
    std::vector<double> values_;
};

// W = H^H H with H in C^{q x n_t}, H = Lambda^{1/2} X. Requires n_t <= q.
struct EnsembleConfig {
    int n_t;
    int q;
    Spectrum spectrum;
};

/// Eigenvalues (1 - xi) * xi^k, k = 0 .. q-1, of the exponentially weighted
/// correlation model, returned ascending. Requires 0 < xi < 1.
Spectrum exponential_spectrum(int q, double xi);

/// Validates dimensions against the spectrum and returns the config.
EnsembleConfig validate_ensemble(int n_t, int q, Spectrum spectrum);

/// Reads a spectrum from a JSON array of numbers or a plain-text file with
/// one eigenvalue per line; values go through the same validation as any
/// other construction.
Spectrum load_spectrum_file(const std::string& path);

}  // namespace gramstat
