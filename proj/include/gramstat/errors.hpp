#pragma once

#include <stdexcept>
#include <string>

namespace gramstat {

// Dense factorization hit an exactly zero pivot.
class singular_matrix_error : public std::runtime_error {
public:
    explicit singular_matrix_error(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature failed to reach the requested tolerance.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double achieved_rel_tol)
        : std::runtime_error(what), achieved_rel_tol_(achieved_rel_tol) {}
    double achieved_rel_tol() const { return achieved_rel_tol_; }

private:
    double achieved_rel_tol_;
};

// Hermitian eigensolver did not converge for one realization.
class eigensolver_error : public std::runtime_error {
public:
    eigensolver_error(const std::string& what, long long realization)
        : std::runtime_error(what), realization_(realization) {}
    long long realization() const { return realization_; }

private:
    long long realization_;
};

}  // namespace gramstat
