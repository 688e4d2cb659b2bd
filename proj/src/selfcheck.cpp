#include "greennet/selfcheck.hpp"

#include "greennet/green.hpp"
#include "greennet/perturbation.hpp"
#include "greennet/random_network.hpp"
#include "greennet/rng.hpp"
#include "greennet/vertex_addition.hpp"

#include <cmath>
#include <vector>

namespace greennet {

namespace {

class Checker {
public:
  Checker(std::vector<SelfCheckFailure>& failures, std::ostream& log, double tol_scale)
      : failures_(failures), log_(log), tol_scale_(tol_scale) {}

  void set_seed(std::uint64_t seed) { seed_ = seed; }

  void check(const std::string& property, double value, double bound) {
    const double limit = bound * tol_scale_;
    if (!(value <= limit)) {
      failures_.push_back({property, seed_, value, limit});
      log_ << "FAIL " << property << " value=" << value << " bound=" << limit;
      if (seed_ != 0) {
        log_ << " seed=" << seed_ << " (replay: greennet selfcheck --seed " << seed_ << ")";
      }
      log_ << '\n';
    }
  }

private:
  std::vector<SelfCheckFailure>& failures_;
  std::ostream& log_;
  double tol_scale_;
  std::uint64_t seed_ = 0;
};

NetworkSpec p2_spec(double lambda = 0.0) {
  return NetworkSpec({"a", "b"}, {{0, 1, 1.0}},
                     Weight::normalized(FunctionOnV::Ones(2)), lambda);
}

void fixture_checks(Checker& ck) {
  // path on two vertices, lambda 0: Green kernel (1/4)[[1,-1],[-1,1]]
  {
    const GreenOperator G = green_for(p2_spec());
    KernelOnV expected(2, 2);
    expected << 0.25, -0.25, -0.25, 0.25;
    ck.check("fixture.green.p2", max_abs(G.kernel() - expected), kSolveTol);
    ck.check("fixture.resistance.p2", std::abs(effective_resistance(G, 0, 1) - 2.0), kSolveTol);
  }
  // unit triangle: every pair at resistance 2.0, kirchhoff index 6.0
  {
    const NetworkSpec k3({"a", "b", "c"}, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}},
                         Weight::normalized(FunctionOnV::Ones(3)), 0.0);
    const GreenOperator G = green_for(k3);
    ck.check("fixture.resistance.k3", std::abs(effective_resistance(G, 0, 1) - 2.0), kSolveTol);
    ck.check("fixture.kirchhoff.k3", std::abs(kirchhoff_index(G) - 6.0), kSolveTol);
  }
  // single vertex plus pendant, lambda 0: raw block form vs corrected form
  {
    const NetworkSpec one({"a"}, {}, Weight(FunctionOnV::Ones(1)), 0.0);
    const GreenOperator G = green_for(one);
    const VertexAttachment att{"b", 1.0, {{0, 1.0}}};
    const Eigen::MatrixXd raw = added_vertex_pinv(G, one, att, /*mp_correct=*/false);
    Eigen::MatrixXd expected_raw(2, 2);
    expected_raw << 0.0, 0.0, 0.0, 1.0;
    ck.check("fixture.pendant.raw", max_abs(raw - expected_raw), kSolveTol);
    const Eigen::MatrixXd corrected = added_vertex_pinv(G, one, att);
    Eigen::MatrixXd expected(2, 2);
    expected << 0.25, -0.25, -0.25, 0.25;
    ck.check("fixture.pendant.mp", max_abs(corrected - expected), kSolveTol);
  }
  // rank-one hand fixtures on the two-vertex path
  {
    const GreenOperator G = green_for(p2_spec());
    const FunctionOnV omega = G.omega().values();
    KernelOnV expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.75;
    ck.check("fixture.rank_one.omega", max_abs(rank_one_update(G, omega) - expected), kSolveTol);
    FunctionOnV diff(2);
    diff << 1.0, -1.0;
    expected << 0.125, -0.125, -0.125, 0.125;
    ck.check("fixture.rank_one.dipole", max_abs(rank_one_update(G, diff) - expected), kSolveTol);
  }
}

void random_case(Checker& ck, std::uint64_t seed) {
  ck.set_seed(seed);
  Rng rng(seed);
  const Index n = 2 + static_cast<Index>(rng.below(7));  // 2..8
  const double lambdas[] = {0.0, 0.5, 2.0};
  const double lambda = lambdas[rng.below(3)];
  RandomNetworkOptions opt;
  opt.lambda = lambda;
  opt.random_weight = rng.below(2) == 1;
  const NetworkSpec spec = random_connected_network(n, rng, opt);
  const KernelOnV Lq = schrodinger_matrix(spec);
  const GreenOperator G = green_for(spec);
  const FunctionOnV& w = spec.weight().values();

  // Green invariants
  ck.check("green.annihilates_omega", max_abs(G.kernel() * w), 1e-10);
  const KernelOnV P = w * w.transpose();
  ck.check("green.poisson_identity",
           max_abs(Lq * G.kernel() - (KernelOnV::Identity(n, n) - P)), kSolveTol);
  if (lambda == 0.0) {
    ck.check("green.matches_pinv_oracle", max_abs(G.kernel() - pinv_oracle(Lq)), kSolveTol);
  } else {
    const KernelOnV inv = Lq.llt().solve(KernelOnV::Identity(n, n));
    ck.check("green.matches_shifted_inverse", max_abs(G.kernel() - (inv - P / lambda)),
             kSolveTol);
  }

  // multi-rank update vs direct pseudoinverse
  {
    const Index count = 1 + static_cast<Index>(rng.below(4));
    std::vector<FunctionOnV> sigmas;
    for (Index i = 0; i < count; ++i) {
      FunctionOnV s(n);
      for (Index j = 0; j < n; ++j) {
        s(j) = rng.uniform(-1.0, 1.0);
      }
      if (rng.below(2) == 1) {
        s -= s.dot(w) * w;  // force orthogonality
      }
      sigmas.push_back(std::move(s));
    }
    const PerturbationFamily family(sigmas, spec.weight());
    const KernelOnV H = assemble_perturbed(Lq, family);
    const KernelOnV X = multi_rank_update(G, family);
    ck.check("perturbation.penrose", penrose_residuals(H, X).max(), kSolveTol);
    if (family.overlap_count() >= 1) {
      Eigen::SelfAdjointEigenSolver<KernelOnV> es(H);
      ck.check("perturbation.positive_definite", -es.eigenvalues().minCoeff(), 0.0);
    }
  }

  // attachment identities
  {
    const Index m = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const VertexAttachment att = random_attachment(spec, m, rng);
    const AttachmentDerived der = derive_attachment(spec, att);
    const FactorFamily factors = attachment_factors(der, lambda);
    const AttachmentBlocks blocks = attachment_blocks(spec, der);
    const NetworkSpec grown = grown_network(spec, att);
    const Eigen::MatrixXd Lp = schrodinger_matrix(grown);

    ck.check("attachment.block_decomposition", max_abs(blocks.assembled - Lp), kEqTol);
    ck.check("attachment.projector_split", projector_split_residual(der, factors, lambda),
             kEqTol);

    Eigen::MatrixXd direct(factors.factors.size(), factors.factors.size());
    for (Index k = 0; k < direct.rows(); ++k) {
      for (Index l = 0; l < direct.cols(); ++l) {
        direct(k, l) = factors.factors[k].dot(G.kernel() * factors.factors[l]);
      }
    }
    ck.check("attachment.gram_closed_form", max_abs(factor_gram(G, der, factors) - direct),
             kEqTol);

    const Eigen::MatrixXd X = added_vertex_pinv(G, spec, att);
    if (lambda > 0.0) {
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n + 1, n + 1);
      ck.check("attachment.exact_inverse",
               std::max(max_abs(X * Lp - I), max_abs(Lp * X - I)), kSolveTol);
    } else {
      ck.check("attachment.penrose", penrose_residuals(Lp, X).max(), kSolveTol);
      ck.check("attachment.annihilates_extended_weight",
               max_abs(X * der.omega_prime.values()), 1e-10);
    }
  }
}

}  // namespace

std::vector<SelfCheckFailure> run_selfcheck(const SelfCheckOptions& opt, std::ostream& log) {
  std::vector<SelfCheckFailure> failures;
  Checker ck(failures, log, opt.tol_scale);

  fixture_checks(ck);
  const int cases = opt.single_seed ? 1 : opt.cases;
  for (int i = 0; i < cases; ++i) {
    random_case(ck, opt.base_seed + static_cast<std::uint64_t>(i));
  }

  log << (failures.empty() ? "selfcheck: all properties hold" : "selfcheck: FAILURES above")
      << " (fixtures + " << cases << " seeded cases)\n";
  return failures;
}

}  // namespace greennet
