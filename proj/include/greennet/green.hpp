#pragma once

#include "greennet/network.hpp"

#include <algorithm>

namespace greennet {

// Kernel of the inverse on omega-perp of an elliptic operator Lq, extended to
// all of C(V) by the Poisson convention: G(f) is the unique solution of
// Lq(u) = f - P_omega(f) with <u,omega> = 0. In particular G(omega) = 0 for
// every lambda >= 0.
class GreenOperator {
public:
  GreenOperator(KernelOnV kernel, double lambda, Weight omega);

  const KernelOnV& kernel() const { return kernel_; }
  double lambda() const { return lambda_; }
  const Weight& omega() const { return omega_; }
  Index size() const { return kernel_.rows(); }
  double operator()(Index x, Index y) const { return kernel_(x, y); }

private:
  KernelOnV kernel_;
  double lambda_;
  Weight omega_;
};

// Computes the Green kernel by solving (Lq + P_omega) Z = I - P_omega.
// Lq + P_omega is positive definite whenever Lq is elliptic with lowest
// eigenvalue lambda >= 0, so the fast path is a Cholesky solve; the
// eigendecomposition lives only in pinv_oracle.
GreenOperator green_direct(const KernelOnV& Lq, double lambda, const Weight& omega);

// schrodinger_matrix + green_direct in one step.
GreenOperator green_for(const NetworkSpec& spec);

// Moore-Penrose inverse of a symmetric matrix via full eigendecomposition.
// Eigenvalues below 1e-10 * spectral radius are treated as zero; the cutoff
// is relative so badly scaled conductances survive.
KernelOnV pinv_oracle(const KernelOnV& M);

FunctionOnV green_apply(const GreenOperator& G, const FunctionOnV& f);

// <G(tau_xy), tau_xy> for the omega-dipole tau_xy. For lambda = 0 on a
// network this is the effective resistance between x and y; for lambda > 0
// the same quadratic form is returned (a generalized resistance).
double effective_resistance(const GreenOperator& G, Index x, Index y);

// Half-sum of effective resistances over all ordered pairs; lambda = 0 only.
double kirchhoff_index(const GreenOperator& G);

// Residuals of the four defining identities of the Moore-Penrose inverse of
// M at X: MXM = M, XMX = X, (MX)^T = MX, (XM)^T = XM.
struct PenroseResiduals {
  double mxm = 0.0;
  double xmx = 0.0;
  double mx_sym = 0.0;
  double xm_sym = 0.0;
  double max() const { return std::max(std::max(mxm, xmx), std::max(mx_sym, xm_sym)); }
};

PenroseResiduals penrose_residuals(const Eigen::MatrixXd& M, const Eigen::MatrixXd& X);

}  // namespace greennet
