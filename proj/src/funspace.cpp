#include "greennet/funspace.hpp"

#include <cmath>

namespace greennet {

Weight::Weight(FunctionOnV values) : values_(std::move(values)) {
  if (values_.size() == 0) {
    throw ValidationError("weight: empty vertex set");
  }
  if (!values_.allFinite()) {
    throw ValidationError("weight: entries must be finite");
  }
  if ((values_.array() <= 0.0).any()) {
    throw ValidationError("weight: entries must be strictly positive");
  }
  const double norm2 = values_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kEqTol) {
    throw ValidationError("weight: squared norm is " + std::to_string(norm2) +
                          ", expected 1 (pass normalize to rescale)");
  }
}

Weight Weight::normalized(FunctionOnV values) {
  const double norm = values.norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw ValidationError("weight: cannot normalize zero or non-finite vector");
  }
  return Weight(values / norm);
}

double inner_product(const FunctionOnV& u, const FunctionOnV& v) {
  require_same_size(u, v, "inner_product");
  return u.dot(v);
}

FunctionOnV dirac(Index x, Index n) {
  if (x < 0 || x >= n) {
    throw LookupError("dirac: vertex index " + std::to_string(x) + " outside 0.." +
                      std::to_string(n - 1));
  }
  FunctionOnV e = FunctionOnV::Zero(n);
  e(x) = 1.0;
  return e;
}

FunctionOnV projector_apply(const FunctionOnV& sigma, const FunctionOnV& tau,
                            const FunctionOnV& u) {
  require_same_size(sigma, tau, "projector_apply");
  require_same_size(tau, u, "projector_apply");
  return tau.dot(u) * sigma;
}

KernelOnV projector_kernel(const FunctionOnV& sigma, const FunctionOnV& tau) {
  require_same_size(sigma, tau, "projector_kernel");
  return sigma * tau.transpose();
}

FunctionOnV dipole(Index x, Index y, const Weight& omega) {
  const Index n = omega.size();
  if (x < 0 || x >= n || y < 0 || y >= n) {
    throw LookupError("dipole: vertex index outside 0.." + std::to_string(n - 1));
  }
  if (x == y) {
    throw ValidationError("dipole: degenerate dipole, endpoints coincide");
  }
  FunctionOnV t = FunctionOnV::Zero(n);
  t(x) = 1.0 / omega(x);
  t(y) = -1.0 / omega(y);
  return t;
}

}  // namespace greennet
