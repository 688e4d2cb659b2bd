#pragma once

#include "greennet/perturbation.hpp"

#include <string>
#include <utility>
#include <vector>

namespace greennet {

// A new vertex, its assigned (un-normalized) weight value, and the anchor
// vertices it is wired to.
struct VertexAttachment {
  std::string new_label;
  double new_weight_value = 1.0;
  std::vector<std::pair<Index, double>> anchors;  // (vertex in the base network, conductance)
};

// Quantities derived from an attachment:
//   rho_i   = sqrt(a_i omega(x_i) omega(x'))
//   sigma_i = (rho_i / omega(x_i)) eps_{x_i}
//   sigma   = sum_i a_i eps_{x_i}      (also the coupling column s)
//   alpha   = lambda + sum_i rho_i^2 / omega(x')^2
struct AttachmentDerived {
  std::vector<Index> anchor;        // x_i, size m
  Eigen::VectorXd conductance;      // a_i
  Eigen::VectorXd anchor_weight;    // omega(x_i)
  Eigen::VectorXd rho;
  std::vector<FunctionOnV> sigma_i; // functions on V
  FunctionOnV sigma;                // on V; equals the block column s
  double alpha = 0.0;
  double new_weight_value = 0.0;    // omega(x'), un-normalized
  Weight omega_prime;               // extended weight on V + {x'}
};

// The m(m+1)/2 rank-one factors that turn the Schur complement of the grown
// operator into a perturbation of the base operator: the first m are
// sqrt(lambda/alpha) sigma_k (zero when lambda = 0), the rest are scaled
// anchor dipoles indexed by the pair map below.
struct FactorFamily {
  std::vector<FunctionOnV> factors;         // size m(m+1)/2, on V
  Index m = 0;
  std::vector<std::pair<Index, Index>> pair_of;  // 1-based (i,j) per position; (k,k) for k <= m

  // 1-based pair index: k = (2m-1-i)i/2 + j for 1 <= i < j <= m.
  static Index pair_index(Index m, Index i, Index j);
};

// Result of attaching: the n x n interior block H = Lq + sum_i P_{sigma_i},
// the coupling column s, the corner scalar alpha, and the assembled
// (n+1) x (n+1) matrix [[H, -s], [-s^T, alpha]].
struct AttachmentBlocks {
  KernelOnV H;
  FunctionOnV s;
  double alpha = 0.0;
  Eigen::MatrixXd assembled;
};

// omega'(x) = omega(x)/sqrt(1 + w_new^2) on V, omega'(x') = w_new/sqrt(1 + w_new^2).
// Preserves ratios between old vertices and keeps unit norm.
Weight extend_weight(const Weight& omega, double w_new);

AttachmentDerived derive_attachment(const NetworkSpec& spec, const VertexAttachment& att);

AttachmentBlocks attachment_blocks(const NetworkSpec& spec, const AttachmentDerived& der);

FactorFamily attachment_factors(const AttachmentDerived& der, double lambda);

// Residual of the split of the combined anchor projector into per-anchor and
// dipole projectors:
//   max | sigma (x) sigma - (alpha-lambda) sum_i sigma_i (x) sigma_i
//         + sum_{i<j} sigma_ij (x) sigma_ij |
// with sigma_ij = sqrt(alpha) * (dipole factor). Zero in exact arithmetic.
double projector_split_residual(const AttachmentDerived& der, const FactorFamily& factors,
                                double lambda);

// Gram matrix A_{k,l} = <G(factor_l), factor_k> evaluated by closed forms
// that only read Green kernel entries at the anchors.
Eigen::MatrixXd factor_gram(const GreenOperator& G, const AttachmentDerived& der,
                            const FactorFamily& factors);

// Specialized update coefficients for the factor family:
//   h    = lambda^+ alpha (alpha + sum_{r,s<=m} b_rs rho_r rho_s)^{-1}
//   h_i  = h sqrt(lambda/alpha) sum_{r<=m} b_ir rho_r
//   h_ij = b_ij - (h lambda/alpha)(sum_r b_ir rho_r)(sum_s b_js rho_s)
// with b = (I + A)^{-1} from factor_gram. Algebraically equal to
// build_coefficients applied to the same family.
UpdateCoefficients attachment_coefficients(const GreenOperator& G, const AttachmentDerived& der,
                                           const FactorFamily& factors);

// (I - P_{omega'}) X (I - P_{omega'}): projects a symmetric {1,2}-inverse of
// a singular operator with kernel span{omega'} onto its Moore-Penrose inverse.
Eigen::MatrixXd mp_kernel_projection(const Eigen::MatrixXd& X, const Weight& omega_prime);

// Moore-Penrose inverse of the grown Schrodinger matrix, computed from the
// base Green kernel in closed form. For lambda > 0 the result is the exact
// inverse. For lambda = 0 the raw block assembly is a symmetric {1,2}-inverse
// but not the Moore-Penrose inverse; with mp_correct (the default) it is
// sandwiched with I - P_{omega'}, which restores all four Penrose identities.
Eigen::MatrixXd added_vertex_pinv(const GreenOperator& G, const NetworkSpec& spec,
                                  const VertexAttachment& att, bool mp_correct = true);

// Single-anchor (pendant) closed form. The coefficient 1 + (alpha-lambda) G(x,x)
// does not reduce to the general update's coefficients for every weight, so the
// result is returned together with the deviation from added_vertex_pinv instead
// of being silently preferred.
struct PendantResult {
  Eigen::MatrixXd matrix;
  double max_dev_vs_general = 0.0;
};

PendantResult pendant_pinv(const GreenOperator& G, const NetworkSpec& spec, Index x, double a,
                           double w_new, const std::string& new_label = "pendant");

// The grown network itself (base edges plus anchor edges, extended weight,
// same lambda) for from-scratch comparisons.
NetworkSpec grown_network(const NetworkSpec& spec, const VertexAttachment& att);

}  // namespace greennet
