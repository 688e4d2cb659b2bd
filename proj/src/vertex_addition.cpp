#include "greennet/vertex_addition.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>

namespace greennet {

namespace {

void validate_attachment(const NetworkSpec& spec, const VertexAttachment& att) {
  const Index n = spec.size();
  if (att.anchors.empty()) {
    throw ValidationError("attachment: at least one anchor is required");
  }
  if (static_cast<Index>(att.anchors.size()) > n) {
    throw ValidationError("attachment: more anchors than vertices");
  }
  if (!(att.new_weight_value > 0.0) || !std::isfinite(att.new_weight_value)) {
    throw ValidationError("attachment: new vertex weight must be positive");
  }
  if (spec.has_label(att.new_label)) {
    throw ValidationError("attachment: label '" + att.new_label + "' already exists");
  }
  std::set<Index> seen;
  for (const auto& [x, a] : att.anchors) {
    if (x < 0 || x >= n) {
      throw LookupError("attachment: anchor index " + std::to_string(x) + " outside 0.." +
                        std::to_string(n - 1));
    }
    if (!seen.insert(x).second) {
      throw ValidationError("attachment: duplicate anchor '" + spec.labels()[x] + "'");
    }
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValidationError("attachment: nonpositive conductance at anchor '" +
                            spec.labels()[x] + "'");
    }
  }
}

}  // namespace

Weight extend_weight(const Weight& omega, double w_new) {
  if (!(w_new > 0.0) || !std::isfinite(w_new)) {
    throw ValidationError("extend_weight: new weight value must be positive");
  }
  const Index n = omega.size();
  const double denom = std::sqrt(1.0 + w_new * w_new);
  FunctionOnV w(n + 1);
  w.head(n) = omega.values() / denom;
  w(n) = w_new / denom;
  return Weight(std::move(w));
}

AttachmentDerived derive_attachment(const NetworkSpec& spec, const VertexAttachment& att) {
  validate_attachment(spec, att);
  const Index n = spec.size();
  const Index m = static_cast<Index>(att.anchors.size());
  const Weight& omega = spec.weight();
  const double w_new = att.new_weight_value;

  AttachmentDerived der{.anchor = {},
                        .conductance = Eigen::VectorXd(m),
                        .anchor_weight = Eigen::VectorXd(m),
                        .rho = Eigen::VectorXd(m),
                        .sigma_i = {},
                        .sigma = FunctionOnV::Zero(n),
                        .alpha = 0.0,
                        .new_weight_value = w_new,
                        .omega_prime = extend_weight(omega, w_new)};
  der.anchor.reserve(m);
  der.sigma_i.reserve(m);

  double alpha = spec.lambda();
  for (Index i = 0; i < m; ++i) {
    const auto& [x, a] = att.anchors[i];
    der.anchor.push_back(x);
    der.conductance(i) = a;
    der.anchor_weight(i) = omega(x);
    der.rho(i) = std::sqrt(a * omega(x) * w_new);
    FunctionOnV s = FunctionOnV::Zero(n);
    s(x) = der.rho(i) / omega(x);
    der.sigma_i.push_back(std::move(s));
    der.sigma(x) += a;
    alpha += der.rho(i) * der.rho(i) / (w_new * w_new);
  }
  der.alpha = alpha;
  return der;
}

AttachmentBlocks attachment_blocks(const NetworkSpec& spec, const AttachmentDerived& der) {
  const Index n = spec.size();
  AttachmentBlocks out;
  out.H = schrodinger_matrix(spec);
  for (const FunctionOnV& s : der.sigma_i) {
    out.H += s * s.transpose();
  }
  out.s = der.sigma;
  out.alpha = der.alpha;
  out.assembled.resize(n + 1, n + 1);
  out.assembled.topLeftCorner(n, n) = out.H;
  out.assembled.topRightCorner(n, 1) = -out.s;
  out.assembled.bottomLeftCorner(1, n) = -out.s.transpose();
  out.assembled(n, n) = out.alpha;
  return out;
}

Index FactorFamily::pair_index(Index m, Index i, Index j) {
  if (!(1 <= i && i < j && j <= m)) {
    throw ValidationError("pair_index: need 1 <= i < j <= m");
  }
  return (2 * m - 1 - i) * i / 2 + j;
}

FactorFamily attachment_factors(const AttachmentDerived& der, double lambda) {
  const Index m = der.rho.size();
  const Index n = der.sigma.size();
  const Index count = m * (m + 1) / 2;
  const double root = std::sqrt(lambda / der.alpha);

  FactorFamily fam;
  fam.m = m;
  fam.factors.assign(count, FunctionOnV::Zero(n));
  fam.pair_of.assign(count, {0, 0});
  for (Index k = 0; k < m; ++k) {
    fam.factors[k] = root * der.sigma_i[k];
    fam.pair_of[k] = {k + 1, k + 1};
  }
  const double inv_root_alpha = 1.0 / std::sqrt(der.alpha);
  for (Index i = 1; i < m; ++i) {
    for (Index j = i + 1; j <= m; ++j) {
      const Index k = FactorFamily::pair_index(m, i, j);
      const double scale = inv_root_alpha * der.rho(i - 1) * der.rho(j - 1) /
                           der.new_weight_value;
      FunctionOnV f = FunctionOnV::Zero(n);
      f(der.anchor[i - 1]) = scale / der.anchor_weight(i - 1);
      f(der.anchor[j - 1]) = -scale / der.anchor_weight(j - 1);
      fam.factors[k - 1] = std::move(f);
      fam.pair_of[k - 1] = {i, j};
    }
  }
  return fam;
}

double projector_split_residual(const AttachmentDerived& der, const FactorFamily& factors,
                                double lambda) {
  const Index m = factors.m;
  KernelOnV residual = der.sigma * der.sigma.transpose();
  for (const FunctionOnV& s : der.sigma_i) {
    residual -= (der.alpha - lambda) * (s * s.transpose());
  }
  const double root_alpha = std::sqrt(der.alpha);
  for (Index k = m; k < static_cast<Index>(factors.factors.size()); ++k) {
    const FunctionOnV sij = root_alpha * factors.factors[k];
    residual += sij * sij.transpose();
  }
  return max_abs(residual);
}

Eigen::MatrixXd factor_gram(const GreenOperator& G, const AttachmentDerived& der,
                            const FactorFamily& factors) {
  const Index m = factors.m;
  const Index count = static_cast<Index>(factors.factors.size());
  const double lambda = G.lambda();
  const double alpha = der.alpha;
  const double w_new = der.new_weight_value;
  const Weight& omega = G.omega();

  // Green kernel entries at anchors, normalized by the weight.
  Eigen::MatrixXd g(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      g(i, j) = G(der.anchor[i], der.anchor[j]) / (omega(der.anchor[i]) * omega(der.anchor[j]));
    }
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(count, count);
  // anchor-anchor block
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < m; ++l) {
      A(k, l) = (lambda / alpha) * der.rho(k) * der.rho(l) * g(k, l);
    }
  }
  const double root_lambda = std::sqrt(lambda);
  // anchor-dipole blocks
  for (Index k = 0; k < m; ++k) {
    for (Index i = 1; i < m; ++i) {
      for (Index j = i + 1; j <= m; ++j) {
        const Index l = FactorFamily::pair_index(m, i, j) - 1;
        const double value = (root_lambda / alpha) * der.rho(k) * der.rho(i - 1) *
                             der.rho(j - 1) / w_new * (g(k, i - 1) - g(k, j - 1));
        A(k, l) = value;
        A(l, k) = value;
      }
    }
  }
  // dipole-dipole block
  for (Index r = 1; r < m; ++r) {
    for (Index s = r + 1; s <= m; ++s) {
      const Index k = FactorFamily::pair_index(m, r, s) - 1;
      for (Index i = 1; i < m; ++i) {
        for (Index j = i + 1; j <= m; ++j) {
          const Index l = FactorFamily::pair_index(m, i, j) - 1;
          A(k, l) = der.rho(i - 1) * der.rho(j - 1) * der.rho(r - 1) * der.rho(s - 1) /
                    (alpha * w_new * w_new) *
                    (g(i - 1, r - 1) - g(i - 1, s - 1) - g(j - 1, r - 1) + g(j - 1, s - 1));
        }
      }
    }
  }
  return A;
}

Eigen::MatrixXd mp_kernel_projection(const Eigen::MatrixXd& X, const Weight& omega_prime) {
  if (X.rows() != X.cols() || X.rows() != omega_prime.size()) {
    throw DimensionError("mp_kernel_projection: matrix and weight dimensions differ");
  }
  // (I - w w^T) X (I - w w^T) expanded into rank-one corrections; keeps the
  // projection quadratic in n instead of cubic.
  const FunctionOnV& w = omega_prime.values();
  const FunctionOnV xw = X * w;
  const FunctionOnV xtw = X.transpose() * w;
  const double wxw = w.dot(xw);
  Eigen::MatrixXd out = X;
  out.noalias() -= xw * w.transpose();
  out.noalias() -= w * xtw.transpose();
  out.noalias() += wxw * (w * w.transpose());
  return out;
}

UpdateCoefficients attachment_coefficients(const GreenOperator& G, const AttachmentDerived& der,
                                           const FactorFamily& factors) {
  const Index count = static_cast<Index>(factors.factors.size());
  const Index m = factors.m;
  const double lambda = G.lambda();
  const double alpha = der.alpha;

  const Eigen::MatrixXd A = factor_gram(G, der, factors);
  Eigen::MatrixXd IA = Eigen::MatrixXd::Identity(count, count) + 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(IA);
  if (es.info() != Eigen::Success) {
    throw NumericalError("attachment_coefficients: eigendecomposition of I + A failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  if (lo <= 0.0 || es.eigenvalues().maxCoeff() / lo > kConditionLimit) {
    throw NumericalError("attachment_coefficients: I + A is ill-conditioned");
  }

  UpdateCoefficients c;
  c.b = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
  const Eigen::VectorXd g = c.b.leftCols(m) * der.rho;  // sum_{r<=m} b_ir rho_r
  const double quad = der.rho.dot(c.b.topLeftCorner(m, m) * der.rho);
  c.h = scalar_dagger(lambda) * alpha / (alpha + quad);
  c.h_i = c.h * std::sqrt(lambda / alpha) * g;
  c.h_ij = c.b - (c.h * lambda / alpha) * (g * g.transpose());
  return c;
}

namespace {

// Interior block M of the grown inverse:
//   M = G + h P_omega - sum_i h_i [P_{G(f_i),omega} + P_{omega,G(f_i)}]
//         - sum_ij h_ij P_{G(f_i),G(f_j)}
Eigen::MatrixXd interior_block(const GreenOperator& G, const AttachmentDerived& der,
                               const FactorFamily& factors) {
  const Index count = static_cast<Index>(factors.factors.size());
  const FunctionOnV& w = G.omega().values();
  const UpdateCoefficients c = attachment_coefficients(G, der, factors);

  Eigen::MatrixXd P(w.size(), count);
  for (Index k = 0; k < count; ++k) {
    P.col(k) = factors.factors[k];
  }
  const Eigen::MatrixXd GP = G.kernel() * P;

  Eigen::MatrixXd M = G.kernel() + c.h * (w * w.transpose());
  const FunctionOnV mixed = GP * c.h_i;
  M -= mixed * w.transpose() + w * mixed.transpose();
  M -= GP * c.h_ij * GP.transpose();
  return (0.5 * (M + M.transpose())).eval();
}

Eigen::MatrixXd assemble_grown_inverse(const Eigen::MatrixXd& M, const FunctionOnV& s,
                                       double alpha) {
  const Index n = M.rows();
  const FunctionOnV Ms = M * s;
  Eigen::MatrixXd out(n + 1, n + 1);
  out.topLeftCorner(n, n) = M;
  out.topRightCorner(n, 1) = Ms / alpha;
  out.bottomLeftCorner(1, n) = Ms.transpose() / alpha;
  out(n, n) = 1.0 / alpha + s.dot(Ms) / (alpha * alpha);
  return out;
}

}  // namespace

Eigen::MatrixXd added_vertex_pinv(const GreenOperator& G, const NetworkSpec& spec,
                                  const VertexAttachment& att, bool mp_correct) {
  if (G.size() != spec.size()) {
    throw DimensionError("added_vertex_pinv: Green kernel order differs from network");
  }
  if (G.lambda() != spec.lambda() ||
      max_abs(G.omega().values() - spec.weight().values()) > kEqTol) {
    throw ValidationError("added_vertex_pinv: Green operator was built for a different "
                          "eigenvalue or weight than the network");
  }
  const AttachmentDerived der = derive_attachment(spec, att);
  const FactorFamily factors = attachment_factors(der, G.lambda());
  const Eigen::MatrixXd M = interior_block(G, der, factors);
  Eigen::MatrixXd out = assemble_grown_inverse(M, der.sigma, der.alpha);
  if (G.lambda() == 0.0 && mp_correct) {
    out = mp_kernel_projection(out, der.omega_prime);
  }
  return out;
}

PendantResult pendant_pinv(const GreenOperator& G, const NetworkSpec& spec, Index x, double a,
                           double w_new, const std::string& new_label) {
  const VertexAttachment att{new_label, w_new, {{x, a}}};
  const AttachmentDerived der = derive_attachment(spec, att);
  const double lambda = G.lambda();
  const double alpha = der.alpha;
  const FunctionOnV& w = G.omega().values();

  const FunctionOnV& sigma1 = der.sigma_i[0];
  const FunctionOnV gs = G.kernel() * sigma1;
  const double gxx = G(x, x);
  const double rho_x = std::sqrt(lambda / alpha) * der.rho(0);
  const double h = lambda * (1.0 + (alpha - lambda) * gxx) + rho_x * rho_x;
  const double inv_h = scalar_dagger(h);

  Eigen::MatrixXd M = G.kernel();
  M -= inv_h * lambda * (gs * gs.transpose());
  M -= inv_h * rho_x * (gs * w.transpose() + w * gs.transpose());
  M += inv_h * (1.0 + (alpha - lambda) * gxx) * (w * w.transpose());

  PendantResult out;
  out.matrix = assemble_grown_inverse(M, der.sigma, alpha);
  const Eigen::MatrixXd general = added_vertex_pinv(G, spec, att, /*mp_correct=*/false);
  out.max_dev_vs_general = max_abs(out.matrix - general);
  return out;
}

NetworkSpec grown_network(const NetworkSpec& spec, const VertexAttachment& att) {
  validate_attachment(spec, att);
  const Index n = spec.size();
  std::vector<std::string> labels = spec.labels();
  labels.push_back(att.new_label);
  std::vector<Edge> edges = spec.edges();
  for (const auto& [x, a] : att.anchors) {
    edges.push_back({x, n, a});
  }
  return NetworkSpec(std::move(labels), std::move(edges),
                     extend_weight(spec.weight(), att.new_weight_value), spec.lambda());
}

}  // namespace greennet
