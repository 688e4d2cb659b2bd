#include "greennet/vertex_addition.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace greennet;
using namespace greennet::testing;

namespace {

struct Fixture {
  NetworkSpec spec;
  GreenOperator G;
  VertexAttachment att;
};

Fixture random_fixture(Rng& rng, double lambda, bool random_weight = true,
                       Index min_n = 2, Index max_n = 8) {
  const Index n = min_n + static_cast<Index>(rng.below(max_n - min_n + 1));
  RandomNetworkOptions opt;
  opt.lambda = lambda;
  opt.random_weight = random_weight;
  NetworkSpec spec = random_connected_network(n, rng, opt);
  GreenOperator G = green_for(spec);
  const Index m = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  VertexAttachment att = random_attachment(spec, m, rng);
  return {std::move(spec), std::move(G), std::move(att)};
}

}  // namespace

TEST_CASE("extend_weight") {
  const Weight omega = Weight::normalized(FunctionOnV::Ones(2));
  const Weight ext = extend_weight(omega, 1.0);
  CHECK(ext.size() == 3);
  CHECK(ext(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ext(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ext(2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(6));
    const Weight w = Weight::normalized(random_function(rng, n, 0.2, 1.5));
    const double w_new = rng.uniform(0.1, 3.0);
    const Weight e = extend_weight(w, w_new);
    CHECK(std::abs(e.values().squaredNorm() - 1.0) <= kEqTol);
    // ratios between old vertices are preserved
    CHECK(e(0) / e(n - 1) == doctest::Approx(w(0) / w(n - 1)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(extend_weight(omega, 0.0), ValidationError);
  CHECK_THROWS_AS(extend_weight(omega, -1.0), ValidationError);
}

TEST_CASE("derive_attachment") {
  const NetworkSpec spec = p2();

  // single anchor, a = 2, new weight 1: rho^2 = 2/sqrt(2), alpha = sqrt(2)
  {
    const VertexAttachment att{"c", 1.0, {{0, 2.0}}};
    const AttachmentDerived der = derive_attachment(spec, att);
    CHECK(der.rho(0) * der.rho(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(der.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(der.sigma(0) == 2.0);
    CHECK(der.sigma(1) == 0.0);
  }

  // join onto both vertices with unit conductances: alpha = sqrt(2)
  {
    const VertexAttachment att{"c", 1.0, {{0, 1.0}, {1, 1.0}}};
    const AttachmentDerived der = derive_attachment(spec, att);
    CHECK(der.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }

  // alpha - lambda does not depend on lambda
  {
    const VertexAttachment att{"c", 1.0, {{0, 1.0}}};
    const double a0 = derive_attachment(p2(0.0), att).alpha - 0.0;
    const double a3 = derive_attachment(p2(3.0), att).alpha - 3.0;
    CHECK(a0 == doctest::Approx(a3).epsilon(1e-14));
  }

  // the two expressions for alpha agree
  {
    Rng rng(52);
    const Fixture fx = random_fixture(rng, 0.5);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    double direct = fx.spec.lambda();
    for (size_t i = 0; i < fx.att.anchors.size(); ++i) {
      direct += fx.att.anchors[i].second * fx.spec.weight()(fx.att.anchors[i].first) /
                fx.att.new_weight_value;
    }
    CHECK(std::abs(der.alpha - direct) <= kEqTol * (1.0 + std::abs(direct)));
  }

  CHECK_THROWS_AS(static_cast<void>(derive_attachment(spec, {"c", 1.0, {{5, 1.0}}})),
                  LookupError);
  CHECK_THROWS_AS(static_cast<void>(derive_attachment(spec, {"c", 1.0, {{0, 1.0}, {0, 2.0}}})),
                  ValidationError);
  CHECK_THROWS_AS(static_cast<void>(derive_attachment(spec, {"c", 1.0, {{0, -1.0}}})),
                  ValidationError);
  CHECK_THROWS_AS(static_cast<void>(derive_attachment(spec, {"c", -1.0, {{0, 1.0}}})),
                  ValidationError);
  CHECK_THROWS_AS(static_cast<void>(derive_attachment(spec, {"a", 1.0, {{0, 1.0}}})),
                  ValidationError);  // label already present
}

TEST_CASE("attachment_blocks on the one-vertex pendant") {
  const NetworkSpec one = single_vertex();
  const VertexAttachment att{"b", 1.0, {{0, 1.0}}};
  const AttachmentBlocks blocks = attachment_blocks(one, derive_attachment(one, att));
  CHECK(blocks.H(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(blocks.s(0) == 1.0);
  CHECK(blocks.alpha == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(blocks.assembled - mat2(1, -1, -1, 1)) <= kEqTol);
}

TEST_CASE("attachment_blocks equals the grown network built from scratch") {
  // pendant on the two-vertex path gives the three-vertex path
  {
    const NetworkSpec spec = p2();
    const VertexAttachment att{"c", 1.0, {{0, 1.0}}};
    const AttachmentBlocks blocks = attachment_blocks(spec, derive_attachment(spec, att));
    const Eigen::MatrixXd direct = schrodinger_matrix(grown_network(spec, att));
    CHECK(max_abs(blocks.assembled - direct) <= kEqTol);
  }

  // shifting lambda only shifts the diagonal
  {
    const VertexAttachment att{"c", 1.5, {{0, 0.7}, {1, 1.3}}};
    const AttachmentBlocks b0 = attachment_blocks(p2(0.0), derive_attachment(p2(0.0), att));
    const AttachmentBlocks b2 = attachment_blocks(p2(2.0), derive_attachment(p2(2.0), att));
    CHECK(max_abs(b2.assembled - b0.assembled - 2.0 * Eigen::MatrixXd::Identity(3, 3)) <=
          kEqTol);
  }

  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const Fixture fx = random_fixture(rng, lambdas[rng.below(3)]);
    const AttachmentBlocks blocks = attachment_blocks(fx.spec, derive_attachment(fx.spec, fx.att));
    const Eigen::MatrixXd direct = schrodinger_matrix(grown_network(fx.spec, fx.att));
    CHECK(max_abs(blocks.assembled - direct) <= kEqTol);
  }
}

TEST_CASE("factor family indexing and orthogonality split") {
  CHECK(FactorFamily::pair_index(2, 1, 2) == 3);
  CHECK(FactorFamily::pair_index(3, 1, 2) == 4);
  CHECK(FactorFamily::pair_index(3, 1, 3) == 5);
  CHECK(FactorFamily::pair_index(3, 2, 3) == 6);
  CHECK_THROWS_AS(static_cast<void>(FactorFamily::pair_index(3, 2, 2)), ValidationError);

  Rng rng(54);
  for (double lambda : {0.0, 0.8}) {
    const Fixture fx = random_fixture(rng, lambda, true, 4, 8);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, lambda);
    const Index m = fam.m;
    CHECK(static_cast<Index>(fam.factors.size()) == m * (m + 1) / 2);

    const FunctionOnV& w = fx.spec.weight().values();
    const double root = std::sqrt(lambda / der.alpha);
    for (Index k = 0; k < static_cast<Index>(fam.factors.size()); ++k) {
      const double overlap = fam.factors[k].dot(w);
      if (k < m) {
        CHECK(std::abs(overlap - root * der.rho(k)) <= kEqTol);
        if (lambda == 0.0) {
          CHECK(max_abs(fam.factors[k]) == 0.0);  // zero members kept, not pruned
        }
      } else {
        CHECK(std::abs(overlap) <= kEqTol);
        CHECK(fam.pair_of[k].first >= 1);
        CHECK(fam.pair_of[k].first < fam.pair_of[k].second);
      }
    }
  }
}

TEST_CASE("projector split residual vanishes") {
  Rng rng(55);
  // m = 1 reduces to an exact scalar identity
  {
    const NetworkSpec spec = p2_weighted();
    const VertexAttachment att{"c", 0.9, {{0, 1.4}}};
    const AttachmentDerived der = derive_attachment(spec, att);
    CHECK(projector_split_residual(der, attachment_factors(der, 0.0), 0.0) <= kEqTol);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const double lambda = lambdas[rng.below(3)];
    const Fixture fx = random_fixture(rng, lambda, true, 5, 8);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, lambda);
    CHECK(projector_split_residual(der, fam, lambda) <=
          kEqTol * (1.0 + max_abs(der.sigma) * max_abs(der.sigma)));
  }
}

TEST_CASE("schur complement of the corner equals the factor perturbation") {
  Rng rng(56);
  for (int trial = 0; trial < 15; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const double lambda = lambdas[rng.below(3)];
    const Fixture fx = random_fixture(rng, lambda, true, 3, 8);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, lambda);
    const AttachmentBlocks blocks = attachment_blocks(fx.spec, der);

    Eigen::MatrixXd S = blocks.H - (blocks.s * blocks.s.transpose()) / blocks.alpha;
    Eigen::MatrixXd perturbed = schrodinger_matrix(fx.spec);
    for (const FunctionOnV& f : fam.factors) {
      perturbed += f * f.transpose();
    }
    CHECK(max_abs(S - perturbed) <= kEqTol * (1.0 + max_abs(blocks.H)));
  }
}

TEST_CASE("factor gram closed form") {
  // lambda = 0: anchor rows and columns vanish
  {
    Rng rng(57);
    const Fixture fx = random_fixture(rng, 0.0, true, 3, 6);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, 0.0);
    const Eigen::MatrixXd A = factor_gram(fx.G, der, fam);
    CHECK(max_abs(A.topRows(fam.m)) == 0.0);
    CHECK(max_abs(A.leftCols(fam.m)) == 0.0);
  }

  // m = 1: single entry (lambda rho^2 / alpha) G(x,x) / omega(x)^2
  {
    const NetworkSpec spec = p2_weighted(1.0);
    const GreenOperator G = green_for(spec);
    const VertexAttachment att{"c", 0.8, {{1, 1.7}}};
    const AttachmentDerived der = derive_attachment(spec, att);
    const FactorFamily fam = attachment_factors(der, 1.0);
    const Eigen::MatrixXd A = factor_gram(G, der, fam);
    const double expected = (1.0 * der.rho(0) * der.rho(0) / der.alpha) * G(1, 1) /
                            (spec.weight()(1) * spec.weight()(1));
    CHECK(A(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }

  // closed form equals the direct Gram matrix
  Rng rng(58);
  for (int trial = 0; trial < 15; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const double lambda = lambdas[rng.below(3)];
    const Fixture fx = random_fixture(rng, lambda, true, 3, 8);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, lambda);
    const Eigen::MatrixXd A = factor_gram(fx.G, der, fam);

    Eigen::MatrixXd direct(A.rows(), A.cols());
    for (Index k = 0; k < A.rows(); ++k) {
      for (Index l = 0; l < A.cols(); ++l) {
        direct(k, l) = fam.factors[k].dot(fx.G.kernel() * fam.factors[l]);
      }
    }
    CHECK(max_abs(A - direct) <= kEqTol);
  }
}

TEST_CASE("specialized coefficients equal the generic ones on the factor family") {
  Rng rng(59);
  for (int trial = 0; trial < 15; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const double lambda = lambdas[rng.below(3)];
    const Fixture fx = random_fixture(rng, lambda, true, 3, 8);
    const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
    const FactorFamily fam = attachment_factors(der, lambda);

    const UpdateCoefficients specialized = attachment_coefficients(fx.G, der, fam);
    const PerturbationFamily generic_family(fam.factors, fx.G.omega());
    // the factor family is already ordered: overlapping members first
    for (Index i = 0; i < generic_family.total(); ++i) {
      CHECK(generic_family.permutation()[i] == i);
    }
    const UpdateCoefficients generic = build_coefficients(fx.G, generic_family);

    CHECK(std::abs(specialized.h - generic.h) <= 1e-10);
    CHECK(max_abs(specialized.b - generic.b) <= 1e-10);
    if (generic.h_i.size() > 0) {
      CHECK(max_abs(specialized.h_i - generic.h_i) <= 1e-10);
      CHECK(max_abs(specialized.h_ij - generic.h_ij) <= 1e-10);
    }
  }
}

TEST_CASE("added_vertex_pinv on the one-vertex pendant") {
  const NetworkSpec one = single_vertex();
  const GreenOperator G = green_for(one);
  const VertexAttachment att{"b", 1.0, {{0, 1.0}}};

  const Eigen::MatrixXd raw = added_vertex_pinv(G, one, att, /*mp_correct=*/false);
  CHECK(max_abs(raw - mat2(0, 0, 0, 1)) <= kEqTol);

  // the raw block form fails the symmetry identities against the grown matrix
  const Eigen::MatrixXd Lp = schrodinger_matrix(grown_network(one, att));
  const PenroseResiduals r = penrose_residuals(Lp, raw);
  CHECK(r.mxm <= 1e-12);
  CHECK(r.xmx <= 1e-12);
  CHECK(r.mx_sym >= 0.1);

  const Eigen::MatrixXd corrected = added_vertex_pinv(G, one, att);
  CHECK(max_abs(corrected - mat2(0.25, -0.25, -0.25, 0.25)) <= kEqTol);
  CHECK(penrose_residuals(Lp, corrected).max() <= kSolveTol);
}

TEST_CASE("added_vertex_pinv is the exact inverse for positive lambda") {
  const NetworkSpec spec = p2(1.0);
  const GreenOperator G = green_for(spec);
  const VertexAttachment att{"c", 1.0, {{0, 1.0}}};
  const Eigen::MatrixXd X = added_vertex_pinv(G, spec, att);
  const Eigen::MatrixXd Lp = schrodinger_matrix(grown_network(spec, att));
  CHECK(max_abs(X * Lp - Eigen::MatrixXd::Identity(3, 3)) <= kSolveTol);
  CHECK(max_abs(Lp * X - Eigen::MatrixXd::Identity(3, 3)) <= kSolveTol);
}

TEST_CASE("added_vertex_pinv matches the recomputed pseudoinverse") {
  Rng rng(60);
  for (int trial = 0; trial < 25; ++trial) {
    const double lambdas[] = {0.0, 0.7, 2.0};
    const double lambda = lambdas[rng.below(3)];
    const Fixture fx = random_fixture(rng, lambda);
    const Eigen::MatrixXd X = added_vertex_pinv(fx.G, fx.spec, fx.att);
    const Eigen::MatrixXd Lp = schrodinger_matrix(grown_network(fx.spec, fx.att));
    CHECK(max_abs(X - pinv_oracle(Lp)) <= kSolveTol);
    if (lambda == 0.0) {
      const AttachmentDerived der = derive_attachment(fx.spec, fx.att);
      CHECK(max_abs(X * der.omega_prime.values()) <= 1e-10);
    }
  }
}

TEST_CASE("pendant closed form") {
  // lambda = 0: the pendant form reduces to the raw general form
  {
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
      const Fixture fx = random_fixture(rng, 0.0);
      const Index x = fx.att.anchors[0].first;
      const PendantResult pr =
          pendant_pinv(fx.G, fx.spec, x, fx.att.anchors[0].second, fx.att.new_weight_value);
      CHECK(pr.max_dev_vs_general <= 1e-10);
    }
  }

  // one-vertex fixture at lambda = 0
  {
    const NetworkSpec one = single_vertex();
    const GreenOperator G = green_for(one);
    const PendantResult pr = pendant_pinv(G, one, 0, 1.0, 1.0);
    CHECK(max_abs(pr.matrix - mat2(0, 0, 0, 1)) <= kEqTol);
    CHECK(pr.max_dev_vs_general <= kEqTol);
  }

  // lambda > 0: the pendant coefficient 1 + (alpha-lambda) G(x,x) is not
  // algebraically forced to match the general route for every weight; any
  // deviation is surfaced, never hidden. On the one-vertex fixture G = 0 and
  // the two routes agree exactly.
  {
    const NetworkSpec one = single_vertex(1.0);
    const GreenOperator G = green_for(one);
    const PendantResult pr = pendant_pinv(G, one, 0, 1.0, 1.0);
    CHECK(pr.max_dev_vs_general <= 1e-12);
    const Eigen::MatrixXd Lp =
        schrodinger_matrix(grown_network(one, {"pendant", 1.0, {{0, 1.0}}}));
    CHECK(max_abs(pr.matrix * Lp - Eigen::MatrixXd::Identity(2, 2)) <= kSolveTol);
  }
  {
    const NetworkSpec spec = p2(1.0);
    const GreenOperator G = green_for(spec);
    const PendantResult pr = pendant_pinv(G, spec, 0, 1.0, 1.0);
    MESSAGE("pendant vs general deviation at lambda=1 on the two-vertex path: ",
            pr.max_dev_vs_general);
    if (pr.max_dev_vs_general > kSolveTol) {
      // documented finding: the single-anchor closed form deviates; the
      // general route stays the trusted one
      const Eigen::MatrixXd Lp =
          schrodinger_matrix(grown_network(spec, {"pendant", 1.0, {{0, 1.0}}}));
      const Eigen::MatrixXd general = added_vertex_pinv(G, spec, {"pendant", 1.0, {{0, 1.0}}});
      CHECK(max_abs(general * Lp - Eigen::MatrixXd::Identity(3, 3)) <= kSolveTol);
    }
  }
}

TEST_CASE("mp_kernel_projection") {
  const Weight uniform = Weight::normalized(FunctionOnV::Ones(2));

  CHECK(max_abs(mp_kernel_projection(mat2(0, 0, 0, 1), uniform) -
                mat2(0.25, -0.25, -0.25, 0.25)) <= kEqTol);

  // already-annihilating input is unchanged
  const Eigen::MatrixXd X = mat2(1, -1, -1, 1);
  CHECK(max_abs(mp_kernel_projection(X, uniform) - X) <= kEqTol);

  Rng rng(62);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const Weight w = Weight::normalized(random_function(rng, n, 0.2, 1.5));
    Eigen::MatrixXd R = Eigen::MatrixXd::NullaryExpr(
        n, n, [&](Index, Index) { return rng.uniform(-1.0, 1.0); });
    R = (0.5 * (R + R.transpose())).eval();
    const Eigen::MatrixXd once = mp_kernel_projection(R, w);
    CHECK(max_abs(once * w.values()) <= kEqTol);
    CHECK(max_abs(mp_kernel_projection(once, w) - once) <= kEqTol);
  }

  CHECK_THROWS_AS(static_cast<void>(mp_kernel_projection(Eigen::MatrixXd::Zero(3, 3), uniform)),
                  DimensionError);
}

TEST_CASE("grown_network validation") {
  const NetworkSpec spec = p2();
  CHECK_THROWS_AS(static_cast<void>(grown_network(spec, {"a", 1.0, {{0, 1.0}}})),
                  ValidationError);
  const NetworkSpec g = grown_network(spec, {"c", 2.0, {{0, 1.0}, {1, 0.5}}});
  CHECK(g.size() == 3);
  CHECK(g.lambda() == spec.lambda());
  CHECK(g.vertex("c").index == 2);
}
