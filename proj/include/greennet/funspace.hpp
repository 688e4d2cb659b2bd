#pragma once

#include "greennet/types.hpp"

namespace greennet {

// Strictly positive function on V with unit Euclidean norm.
class Weight {
public:
  explicit Weight(FunctionOnV values);

  // Rescales to unit norm before validating; empty or nonpositive input still throws.
  static Weight normalized(FunctionOnV values);

  const FunctionOnV& values() const { return values_; }
  double operator()(Index x) const { return values_(x); }
  Index size() const { return values_.size(); }

private:
  FunctionOnV values_;
};

// <u,v> = sum_x u(x) v(x)
double inner_product(const FunctionOnV& u, const FunctionOnV& v);

// Dirac function at x on a vertex set of size n.
FunctionOnV dirac(Index x, Index n);

// P_{sigma,tau}(u) = <tau,u> sigma
FunctionOnV projector_apply(const FunctionOnV& sigma, const FunctionOnV& tau,
                            const FunctionOnV& u);

// Kernel of P_{sigma,tau}: sigma(x) tau(y). Rank <= 1.
KernelOnV projector_kernel(const FunctionOnV& sigma, const FunctionOnV& tau);

// eps_x/omega(x) - eps_y/omega(y); orthogonal to omega by construction.
FunctionOnV dipole(Index x, Index y, const Weight& omega);

}  // namespace greennet
