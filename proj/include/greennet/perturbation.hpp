#pragma once

#include "greennet/green.hpp"

#include <vector>

namespace greennet {

// Family sigma_1..sigma_{m+l} used to perturb an elliptic operator by
// sum_i P_{sigma_i}. Members with <sigma_i,omega> != 0 must occupy the first
// m positions; the constructor re-sorts (stably) instead of erroring and
// records the permutation.
class PerturbationFamily {
public:
  PerturbationFamily(std::vector<FunctionOnV> sigmas, const Weight& omega);

  Index total() const { return static_cast<Index>(members_.size()); }  // m + l
  Index overlap_count() const { return m_; }                           // m
  const FunctionOnV& member(Index i) const { return members_[i]; }
  const std::vector<FunctionOnV>& members() const { return members_; }
  double overlap(Index i) const { return overlaps_[i]; }  // <sigma_i, omega>
  // permutation()[i] = position of member i in the caller's ordering
  const std::vector<Index>& permutation() const { return permutation_; }
  const Weight& omega() const { return omega_; }

private:
  std::vector<FunctionOnV> members_;
  std::vector<double> overlaps_;
  std::vector<Index> permutation_;
  Index m_ = 0;
  Weight omega_;
};

struct UpdateCoefficients {
  Eigen::MatrixXd b;  // (I + A)^{-1} with A_ij = <G(sigma_j), sigma_i>
  double h = 0.0;
  Eigen::VectorXd h_i;
  Eigen::MatrixXd h_ij;
};

// Inverse (or Green kernel) of F + P_sigma from the Green kernel of F.
// If lambda = 0 and <sigma,omega> = 0 the perturbed operator stays singular
// and the updated Green kernel is returned; otherwise the perturbed operator
// is invertible and its full inverse is returned.
KernelOnV rank_one_update(const GreenOperator& G, const FunctionOnV& sigma);

// Coefficients b, h, h_i, h_ij of the multi-rank update. The scalar h uses
// the pseudoinverse convention 0 -> 0; the h sums run over the first m
// members only.
UpdateCoefficients build_coefficients(const GreenOperator& G, const PerturbationFamily& family);

// Moore-Penrose inverse of H = Lq + sum_i P_{sigma_i} assembled from the
// Green kernel of Lq and the update coefficients:
//   H^+ = G + h P_omega - sum_i h_i [P_{G(sigma_i),omega} + P_{omega,G(sigma_i)}]
//           - sum_ij h_ij P_{G(sigma_i),G(sigma_j)}
KernelOnV multi_rank_update(const GreenOperator& G, const PerturbationFamily& family);

// Lq + sum_i sigma_i (x) sigma_i, the perturbed operator itself.
KernelOnV assemble_perturbed(const KernelOnV& Lq, const PerturbationFamily& family);

// Block generalized inverse of [[A, B], [B^T, D]] with D invertible:
//   [[S^+, -S^+ B D^{-1}], [-D^{-1} B^T S^+, D^{-1} + D^{-1} B^T S^+ B D^{-1}]]
// where S = A - B D^{-1} B^T. The result is the Moore-Penrose inverse when
// the block matrix is invertible; when S is singular it is a symmetric
// {1,2}-inverse and the caller is responsible for any range correction.
// A supplied S^+ overrides the internal pinv_oracle call.
Eigen::MatrixXd schur_block_pinv(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& D,
                                 const Eigen::MatrixXd* S_pinv = nullptr);

}  // namespace greennet
