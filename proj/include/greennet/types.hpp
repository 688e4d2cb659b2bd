#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace greennet {

// Real-valued function on the ordered vertex set (dense vector role).
using FunctionOnV = Eigen::VectorXd;

// Real-valued function on V x V (dense matrix role). Symmetry is not a
// type-level guarantee: rank-one projector kernels sigma (x) tau with
// sigma != tau are asymmetric.
using KernelOnV = Eigen::MatrixXd;

using Index = Eigen::Index;

// Centralized tolerances.
inline constexpr double kEqTol = 1e-12;           // exact algebraic identities
inline constexpr double kSolveTol = 1e-9;         // values passing through linear solves
inline constexpr double kOrthTol = 1e-10;         // |<sigma,omega>| classification cutoff
inline constexpr double kScalarDaggerTol = 1e-14; // scalar pseudoinverse zero cutoff
inline constexpr double kConditionLimit = 1e12;   // refuse solves beyond this condition

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class SpectralError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

// Scalar pseudoinverse: 0 for |t| <= kScalarDaggerTol, 1/t otherwise.
inline double scalar_dagger(double t) {
  return std::abs(t) <= kScalarDaggerTol ? 0.0 : 1.0 / t;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_same_size(const FunctionOnV& u, const FunctionOnV& v, const char* where) {
  if (u.size() != v.size()) {
    throw DimensionError(std::string(where) + ": length mismatch (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
}

}  // namespace greennet
