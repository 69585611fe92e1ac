#include "gramstat/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "gramstat/errors.hpp"

namespace gramstat {

namespace {

// SplitMix64: 64-bit all-purpose mixer; one independent stream per
// realization keeps the sample identical under any future work splitting.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]: never zero, so log() below is safe.
    double next_unit_positive() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

SplitMix64 stream_for_realization(std::uint64_t seed, std::int64_t index) {
    SplitMix64 mixer{seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1))};
    mixer.next();
    return {mixer.next()};
}

// Box-Muller pair of standard normals.
void gaussian_pair(SplitMix64& rng, double& z0, double& z1) {
    const double r = std::sqrt(-2.0 * std::log(rng.next_unit_positive()));
    const double theta = 2.0 * std::numbers::pi * rng.next_unit();
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
}

constexpr char kMagic[8] = {'G', 'R', 'A', 'M', 'S', 'M', 'P', '1'};

double pow_int(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<double> eigenvalues, std::int64_t n_samples, int n_t,
                                 std::uint64_t seed, std::optional<EnsembleConfig> config)
    : eigenvalues_(std::move(eigenvalues)),
      n_samples_(n_samples),
      n_t_(n_t),
      seed_(seed),
      config_(std::move(config)) {
    if (eigenvalues_.size() != static_cast<std::size_t>(n_samples_) * static_cast<std::size_t>(n_t_)) {
        throw std::invalid_argument("EmpiricalSample: eigenvalue count does not match n_samples * n_t");
    }
    sorted_ = eigenvalues_;
    std::sort(sorted_.begin(), sorted_.end());
}

EmpiricalSample sample_eigenvalues(const EnsembleConfig& config, std::int64_t n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 1) {
        throw std::invalid_argument("sample_eigenvalues: n_samples must be positive");
    }
    const int q = config.q;
    const int n_t = config.n_t;
    const double clamp_floor = -1e-10 * config.spectrum.max() * static_cast<double>(q);

    Eigen::VectorXd sqrt_beta(q);
    for (int i = 0; i < q; ++i) sqrt_beta(i) = std::sqrt(config.spectrum[static_cast<std::size_t>(i)]);

    std::vector<double> eigenvalues;
    eigenvalues.reserve(static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(n_t));

    Eigen::MatrixXcd h(q, n_t);
    Eigen::MatrixXcd w(n_t, n_t);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    for (std::int64_t r = 0; r < n_samples; ++r) {
        SplitMix64 rng = stream_for_realization(seed, r);
        for (int col = 0; col < n_t; ++col) {
            for (int row = 0; row < q; ++row) {
                double re, im;
                gaussian_pair(rng, re, im);
                h(row, col) = sqrt_beta(row) * std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
            }
        }
        w.noalias() = h.adjoint() * h;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw eigensolver_error("sample_eigenvalues: eigensolver failed at realization " +
                                        std::to_string(r),
                                    r);
        }
        for (int i = 0; i < n_t; ++i) {
            double ev = solver.eigenvalues()(i);
            if (ev < clamp_floor) {
                throw std::logic_error("sample_eigenvalues: eigenvalue " + std::to_string(ev) +
                                       " below the PSD rounding floor at realization " +
                                       std::to_string(r));
            }
            eigenvalues.push_back(ev < 0.0 ? 0.0 : ev);
        }
    }
    return EmpiricalSample(std::move(eigenvalues), n_samples, n_t, seed, config);
}

MomentEstimate empirical_moment(const EmpiricalSample& sample, int p) {
    if (p < 0) throw std::domain_error("empirical_moment: p must be nonnegative");
    if (p == 0) return {1.0, 0.0};

    const auto& values = sample.eigenvalues();
    const auto n = static_cast<double>(values.size());
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (double v : values) {
        const double x = pow_int(v, p);
        sum += x;
        sum_sq += static_cast<long double>(x) * x;
    }
    const double mean = static_cast<double>(sum / n);
    const double var =
        values.size() > 1
            ? static_cast<double>((sum_sq - sum * sum / n) / (n - 1.0))
            : 0.0;
    const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
    return {mean, sd / std::sqrt(n)};
}

double empirical_cdf(const EmpiricalSample& sample, double lambda) {
    const auto& sorted = sample.sorted_eigenvalues();
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), lambda);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double ks_distance(const DensityModel& model, const EmpiricalSample& sample) {
    const auto& sorted = sample.sorted_eigenvalues();
    if (sorted.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const auto n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double model_cdf = approx_cdf(model, sorted[i]);
        const double below = static_cast<double>(i) / n;
        const double above = static_cast<double>(i + 1) / n;
        sup = std::max({sup, std::abs(model_cdf - below), std::abs(model_cdf - above)});
    }
    return sup;
}

void export_binary(const EmpiricalSample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("export_binary: cannot open " + path);
    const std::uint64_t n_samples = static_cast<std::uint64_t>(sample.n_samples());
    const std::uint64_t n_t = static_cast<std::uint64_t>(sample.n_t());
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&n_samples), sizeof(n_samples));
    out.write(reinterpret_cast<const char*>(&n_t), sizeof(n_t));
    out.write(reinterpret_cast<const char*>(sample.eigenvalues().data()),
              static_cast<std::streamsize>(sample.eigenvalues().size() * sizeof(double)));
    if (!out) throw std::runtime_error("export_binary: write failed for " + path);
}

void export_csv(const EmpiricalSample& sample, std::ostream& out) {
    out << "realization,slot,eigenvalue\n";
    char buffer[64];
    const auto& values = sample.eigenvalues();
    const int n_t = sample.n_t();
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", values[i]);
        out << (i / static_cast<std::size_t>(n_t)) << ',' << (i % static_cast<std::size_t>(n_t))
            << ',' << buffer << '\n';
    }
}

void export_csv(const EmpiricalSample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    export_csv(sample, static_cast<std::ostream&>(out));
    if (!out) throw std::runtime_error("export_csv: write failed for " + path);
}

EmpiricalSample import_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("import_binary: cannot open " + path);
    char magic[8];
    std::uint64_t n_samples = 0;
    std::uint64_t n_t = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&n_samples), sizeof(n_samples));
    in.read(reinterpret_cast<char*>(&n_t), sizeof(n_t));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("import_binary: " + path + " is not a sample dump");
    }
    std::vector<double> values(n_samples * n_t);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("import_binary: truncated data in " + path);
    return EmpiricalSample(std::move(values), static_cast<std::int64_t>(n_samples),
                           static_cast<int>(n_t), 0, std::nullopt);
}

EmpiricalSample import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("realization,slot,eigenvalue", 0) != 0) {
        throw std::runtime_error("import_csv: missing header in " + path);
    }
    std::vector<double> values;
    int max_slot = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string realization, slot, value;
        if (!std::getline(fields, realization, ',') || !std::getline(fields, slot, ',') ||
            !std::getline(fields, value)) {
            throw std::runtime_error("import_csv: malformed row '" + line + "'");
        }
        max_slot = std::max(max_slot, std::stoi(slot));
        values.push_back(std::stod(value));
    }
    const int n_t = max_slot + 1;
    if (values.empty() || values.size() % static_cast<std::size_t>(n_t) != 0) {
        throw std::runtime_error("import_csv: inconsistent row count in " + path);
    }
    const auto n_samples = static_cast<std::int64_t>(values.size() / static_cast<std::size_t>(n_t));
    return EmpiricalSample(std::move(values), n_samples, n_t, 0, std::nullopt);
}

}  // namespace gramstat
