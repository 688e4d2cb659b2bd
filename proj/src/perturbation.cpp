#include "greennet/perturbation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace greennet {

namespace {

void warn_if_borderline(double overlap) {
  const double a = std::abs(overlap);
  if (a > kOrthTol && a <= 100.0 * kOrthTol) {
    std::cerr << "greennet: warning: |<sigma,omega>| = " << a
              << " is barely above the orthogonality cutoff; treating sigma as "
                 "non-orthogonal\n";
  }
}

// columns = family members
Eigen::MatrixXd member_matrix(const PerturbationFamily& family) {
  const Index n = family.omega().size();
  Eigen::MatrixXd S(n, family.total());
  for (Index i = 0; i < family.total(); ++i) {
    S.col(i) = family.member(i);
  }
  return S;
}

}  // namespace

PerturbationFamily::PerturbationFamily(std::vector<FunctionOnV> sigmas, const Weight& omega)
    : omega_(omega) {
  const Index n = omega.size();
  const Index k = static_cast<Index>(sigmas.size());
  for (const FunctionOnV& s : sigmas) {
    if (s.size() != n) {
      throw DimensionError("perturbation family: member length differs from weight");
    }
    if (!s.allFinite()) {
      throw ValidationError("perturbation family: member has non-finite entries");
    }
  }

  std::vector<Index> order(k);
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<double> raw_overlap(k);
  for (Index i = 0; i < k; ++i) {
    raw_overlap[i] = sigmas[i].dot(omega.values());
  }
  // stable partition: members overlapping omega first, original order kept
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return (std::abs(raw_overlap[a]) > kOrthTol) > (std::abs(raw_overlap[b]) > kOrthTol);
  });

  members_.reserve(k);
  overlaps_.reserve(k);
  permutation_.assign(k, 0);
  for (Index pos = 0; pos < k; ++pos) {
    const Index src = order[pos];
    members_.push_back(std::move(sigmas[src]));
    overlaps_.push_back(raw_overlap[src]);
    permutation_[src] = pos;
    if (std::abs(raw_overlap[src]) > kOrthTol) {
      m_ = pos + 1;
      warn_if_borderline(raw_overlap[src]);
    }
  }
}

KernelOnV rank_one_update(const GreenOperator& G, const FunctionOnV& sigma) {
  if (sigma.size() != G.size()) {
    throw DimensionError("rank_one_update: sigma length differs from kernel order");
  }
  const double lambda = G.lambda();
  const FunctionOnV& w = G.omega().values();
  const double sw = sigma.dot(w);
  const FunctionOnV gs = G.kernel() * sigma;
  const double gss = gs.dot(sigma);

  if (lambda == 0.0 && std::abs(sw) <= kOrthTol) {
    // perturbed operator stays singular; updated Green kernel
    return G.kernel() - (1.0 / (1.0 + gss)) * (gs * gs.transpose());
  }

  warn_if_borderline(sw);
  const double beta = lambda * (1.0 + gss) + sw * sw;
  if (beta <= kScalarDaggerTol) {
    throw NumericalError("rank_one_update: beta = " + std::to_string(beta) +
                         " is numerically zero; perturbed operator not invertible");
  }
  KernelOnV out = G.kernel();
  out -= (lambda / beta) * (gs * gs.transpose());
  out -= (sw / beta) * (gs * w.transpose() + w * gs.transpose());
  out += ((1.0 + gss) / beta) * (w * w.transpose());
  return out;
}

UpdateCoefficients build_coefficients(const GreenOperator& G, const PerturbationFamily& family) {
  if (max_abs(family.omega().values() - G.omega().values()) > kEqTol) {
    throw ValidationError("build_coefficients: family was classified against a different weight");
  }
  const Index k = family.total();
  const Index m = family.overlap_count();

  UpdateCoefficients out;
  if (k == 0) {
    out.b.resize(0, 0);
    out.h = scalar_dagger(G.lambda());
    out.h_i.resize(0);
    out.h_ij.resize(0, 0);
    return out;
  }

  const Eigen::MatrixXd S = member_matrix(family);
  Eigen::MatrixXd IA = S.transpose() * (G.kernel() * S);
  IA = (0.5 * (IA + IA.transpose())).eval();
  IA += Eigen::MatrixXd::Identity(k, k);

  // A is a Gram matrix of a positive semi-definite kernel, so I + A has
  // eigenvalues >= 1; the guard catches inconsistent input.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(IA);
  if (es.info() != Eigen::Success) {
    throw NumericalError("build_coefficients: eigendecomposition of I + A failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kConditionLimit) {
    throw NumericalError("build_coefficients: I + A is ill-conditioned (condition " +
                         std::to_string(lo <= 0.0 ? std::numeric_limits<double>::infinity()
                                                  : hi / lo) +
                         ")");
  }
  out.b = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
          es.eigenvectors().transpose();

  Eigen::VectorXd wm(m);
  for (Index i = 0; i < m; ++i) {
    wm(i) = family.overlap(i);
  }
  const Eigen::VectorXd g = out.b.leftCols(m) * wm;  // g_i = sum_{r<=m} b_ir <sigma_r,omega>
  const double quad = wm.dot(out.b.topLeftCorner(m, m) * wm);
  out.h = scalar_dagger(G.lambda() + quad);
  out.h_i = out.h * g;
  out.h_ij = out.b - out.h * (g * g.transpose());
  return out;
}

KernelOnV multi_rank_update(const GreenOperator& G, const PerturbationFamily& family) {
  const UpdateCoefficients c = build_coefficients(G, family);
  const FunctionOnV& w = G.omega().values();
  KernelOnV out = G.kernel() + c.h * (w * w.transpose());
  if (family.total() == 0) {
    return out;
  }
  const Eigen::MatrixXd S = member_matrix(family);
  const Eigen::MatrixXd GS = G.kernel() * S;  // columns G(sigma_i)
  const FunctionOnV mixed = GS * c.h_i;
  out -= mixed * w.transpose() + w * mixed.transpose();
  out -= GS * c.h_ij * GS.transpose();
  return (0.5 * (out + out.transpose())).eval();
}

KernelOnV assemble_perturbed(const KernelOnV& Lq, const PerturbationFamily& family) {
  if (Lq.rows() != family.omega().size() || Lq.cols() != family.omega().size()) {
    throw DimensionError("assemble_perturbed: operator and family dimensions differ");
  }
  KernelOnV H = Lq;
  for (Index i = 0; i < family.total(); ++i) {
    H += family.member(i) * family.member(i).transpose();
  }
  return H;
}

Eigen::MatrixXd schur_block_pinv(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& D, const Eigen::MatrixXd* S_pinv) {
  const Index n = A.rows();
  const Index m = D.rows();
  if (A.cols() != n || D.cols() != m || B.rows() != n || B.cols() != m) {
    throw DimensionError("schur_block_pinv: inconsistent block dimensions");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > kConditionLimit) {
    throw NumericalError("schur_block_pinv: D is singular or ill-conditioned");
  }
  const Eigen::MatrixXd Dinv = svd.solve(Eigen::MatrixXd::Identity(m, m));

  const Eigen::MatrixXd BDinv = B * Dinv;
  const Eigen::MatrixXd S = A - BDinv * B.transpose();
  const Eigen::MatrixXd Sp = S_pinv != nullptr ? *S_pinv : pinv_oracle(S);
  if (Sp.rows() != n || Sp.cols() != n) {
    throw DimensionError("schur_block_pinv: supplied S^+ has wrong dimensions");
  }

  const Eigen::MatrixXd DinvBt = Dinv * B.transpose();
  Eigen::MatrixXd out(n + m, n + m);
  out.topLeftCorner(n, n) = Sp;
  out.topRightCorner(n, m) = -Sp * BDinv;
  out.bottomLeftCorner(m, n) = -DinvBt * Sp;
  out.bottomRightCorner(m, m) = Dinv + DinvBt * Sp * BDinv;
  return out;
}

}  // namespace greennet
