#include "greennet/green.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace greennet {

GreenOperator::GreenOperator(KernelOnV kernel, double lambda, Weight omega)
    : kernel_(std::move(kernel)), lambda_(lambda), omega_(std::move(omega)) {
  if (kernel_.rows() != kernel_.cols()) {
    throw DimensionError("green: kernel must be square");
  }
  if (kernel_.rows() != omega_.size()) {
    throw DimensionError("green: kernel and weight dimensions differ");
  }
  if (lambda_ < 0.0) {
    throw ValidationError("green: lambda must be nonnegative");
  }
  const double scale = 1.0 + max_abs(kernel_);
  if (max_abs(kernel_ - kernel_.transpose()) > 1e-10 * scale) {
    throw SpectralError("green: kernel is not symmetric");
  }
  if (max_abs(kernel_ * omega_.values()) > 1e-10 * scale) {
    throw SpectralError("green: kernel does not annihilate omega");
  }
}

GreenOperator green_direct(const KernelOnV& Lq, double lambda, const Weight& omega) {
  const Index n = omega.size();
  if (Lq.rows() != n || Lq.cols() != n) {
    throw DimensionError("green_direct: operator and weight dimensions differ");
  }
  if (lambda < 0.0) {
    throw ValidationError("green_direct: lambda must be nonnegative");
  }
  const FunctionOnV& w = omega.values();
  const double scale = 1.0 + max_abs(Lq);
  if (max_abs(Lq * w - lambda * w) > kSolveTol * scale) {
    throw SpectralError("green_direct: omega is not an eigenfunction for lambda");
  }

  const KernelOnV P = w * w.transpose();
  Eigen::LLT<KernelOnV> llt(Lq + P);
  if (llt.info() != Eigen::Success) {
    throw SpectralError("green_direct: operator is not elliptic (shifted matrix not positive definite)");
  }
  KernelOnV Z = llt.solve(KernelOnV::Identity(n, n) - P);
  Z = (0.5 * (Z + Z.transpose())).eval();

  // Residual of the defining Poisson identity; catches non-elliptic input
  // that slipped past the factorization (e.g. numerically singular Lq).
  const double residual = max_abs(Lq * Z - (KernelOnV::Identity(n, n) - P));
  if (residual > kSolveTol * scale * (1.0 + max_abs(Z))) {
    throw SpectralError("green_direct: Poisson residual " + std::to_string(residual) +
                        " too large; operator not elliptic for the given weight");
  }
  return GreenOperator(std::move(Z), lambda, omega);
}

GreenOperator green_for(const NetworkSpec& spec) {
  return green_direct(schrodinger_matrix(spec), spec.lambda(), spec.weight());
}

KernelOnV pinv_oracle(const KernelOnV& M) {
  if (M.rows() != M.cols()) {
    throw DimensionError("pinv_oracle: matrix must be square");
  }
  if (max_abs(M - M.transpose()) > 1e-10) {
    throw ValidationError("pinv_oracle: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<KernelOnV> es(0.5 * (M + M.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericalError("pinv_oracle: eigendecomposition failed");
  }
  const Eigen::VectorXd& d = es.eigenvalues();
  const double cutoff = 1e-10 * d.cwiseAbs().maxCoeff();
  Eigen::VectorXd dinv(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    dinv(i) = std::abs(d(i)) <= cutoff ? 0.0 : 1.0 / d(i);
  }
  return es.eigenvectors() * dinv.asDiagonal() * es.eigenvectors().transpose();
}

FunctionOnV green_apply(const GreenOperator& G, const FunctionOnV& f) {
  if (f.size() != G.size()) {
    throw DimensionError("green_apply: input length differs from kernel order");
  }
  return G.kernel() * f;
}

double effective_resistance(const GreenOperator& G, Index x, Index y) {
  const FunctionOnV tau = dipole(x, y, G.omega());
  return tau.dot(G.kernel() * tau);
}

PenroseResiduals penrose_residuals(const Eigen::MatrixXd& M, const Eigen::MatrixXd& X) {
  if (M.rows() != X.cols() || M.cols() != X.rows()) {
    throw DimensionError("penrose_residuals: incompatible dimensions");
  }
  const Eigen::MatrixXd MX = M * X;
  const Eigen::MatrixXd XM = X * M;
  return {max_abs(MX * M - M), max_abs(XM * X - X), max_abs(MX - MX.transpose()),
          max_abs(XM - XM.transpose())};
}

double kirchhoff_index(const GreenOperator& G) {
  if (G.lambda() != 0.0) {
    throw UnsupportedError("kirchhoff_index: defined for lambda = 0 only");
  }
  // expand <G(tau_xy), tau_xy> = G(x,x)/w(x)^2 + G(y,y)/w(y)^2 - 2 G(x,y)/(w(x)w(y))
  // so the pair sum only reads kernel entries
  double total = 0.0;
  const FunctionOnV& w = G.omega().values();
  for (Index x = 0; x < G.size(); ++x) {
    for (Index y = x + 1; y < G.size(); ++y) {
      total += G(x, x) / (w(x) * w(x)) + G(y, y) / (w(y) * w(y)) -
               2.0 * G(x, y) / (w(x) * w(y));
    }
  }
  return total;
}

}  // namespace greennet
