#include "gramstat/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gramstat {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("Spectrum: at least one eigenvalue required");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Spectrum: eigenvalues must be finite");
        }
        if (v <= 0.0) {
            throw std::invalid_argument("Spectrum: eigenvalues must be strictly positive");
        }
    }
    std::sort(values_.begin(), values_.end());
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const double gap = values_[i] - values_[i - 1];
        if (gap < kDuplicateRelTol * values_[i]) {
            std::ostringstream msg;
            msg << "Spectrum: duplicate eigenvalues " << values_[i - 1] << " and " << values_[i]
                << " (relative gap below " << kDuplicateRelTol << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

double Spectrum::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

Spectrum exponential_spectrum(int q, double xi) {
    if (q < 1) {
        throw std::domain_error("exponential_spectrum: q must be >= 1");
    }
    if (!(xi > 0.0 && xi < 1.0)) {
        throw std::domain_error("exponential_spectrum: xi must lie in (0, 1)");
    }
    std::vector<double> values(static_cast<std::size_t>(q));
    double power = 1.0;
    for (int k = 0; k < q; ++k) {
        values[static_cast<std::size_t>(k)] = (1.0 - xi) * power;
        power *= xi;
    }
    return Spectrum(std::move(values));
}

EnsembleConfig validate_ensemble(int n_t, int q, Spectrum spectrum) {
    if (n_t < 1 || q < 1) {
        throw std::invalid_argument("validate_ensemble: dimensions must be positive");
    }
    if (n_t > q) {
        throw std::invalid_argument("validate_ensemble: n_t must not exceed q (got n_t=" +
                                    std::to_string(n_t) + ", q=" + std::to_string(q) + ")");
    }
    if (spectrum.size() != static_cast<std::size_t>(q)) {
        throw std::invalid_argument("validate_ensemble: spectrum length " +
                                    std::to_string(spectrum.size()) + " does not match q=" +
                                    std::to_string(q));
    }
    return EnsembleConfig{n_t, q, std::move(spectrum)};
}

Spectrum load_spectrum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_spectrum_file: cannot open " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw std::invalid_argument("load_spectrum_file: " + path + " is empty");
    }

    std::vector<double> values;
    if (text[first] == '[') {
        const auto parsed = nlohmann::json::parse(text);
        if (!parsed.is_array()) {
            throw std::invalid_argument("load_spectrum_file: JSON root must be an array");
        }
        for (const auto& item : parsed) {
            if (!item.is_number()) {
                throw std::invalid_argument("load_spectrum_file: JSON array must hold numbers");
            }
            values.push_back(item.get<double>());
        }
    } else {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            const auto begin = line.find_first_not_of(" \t\r");
            if (begin == std::string::npos) continue;
            std::size_t consumed = 0;
            const double v = std::stod(line.substr(begin), &consumed);
            const auto rest = line.find_first_not_of(" \t\r", begin + consumed);
            if (rest != std::string::npos) {
                throw std::invalid_argument("load_spectrum_file: trailing characters in line '" +
                                            line + "'");
            }
            values.push_back(v);
        }
    }
    return Spectrum(std::move(values));
}

}  // namespace gramstat
