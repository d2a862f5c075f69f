#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "conelab/lie_matrix.hpp"
#include "conelab/linalg.hpp"
#include "doctest.h"

using namespace conelab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd rotation_pair(int n, int i, int j) {
  MatrixXd m = MatrixXd::Zero(n, n);
  m(i, j) = -1;
  m(j, i) = 1;
  return m;
}

MatrixXd embed_block(const MatrixXd& m, int offset, int n) {
  MatrixXd out = MatrixXd::Zero(n, n);
  out.block(offset, offset, m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

TEST_SUITE("lie_matrix") {

TEST_CASE("so_basis spans the metric-skew matrices") {
  for (auto [t, s] : {std::pair{0, 3}, {1, 2}, {1, 3}}) {
    int n = t + s;
    std::vector<MatrixXd> basis = so_basis(t, s);
    CHECK(static_cast<int>(basis.size()) == n * (n - 1) / 2);
    MatrixXd g = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = i < t ? -1.0 : 1.0;
    for (const MatrixXd& a : basis)
      CHECK((a.transpose() * g + g * a).cwiseAbs().maxCoeff() < 1e-14);
    // closed under brackets
    for (const MatrixXd& a : basis)
      for (const MatrixXd& b : basis)
        CHECK(span_residual(basis, a * b - b * a) < 1e-12);
  }
}

TEST_CASE("make validates independence and bracket closure") {
  std::vector<MatrixXd> so3 = so_basis(0, 3);
  MatrixAlgebra alg = MatrixAlgebra::make(so3);
  CHECK(alg.dim() == 3);
  CHECK(alg.ambient_dim == 3);

  // two rotation generators of so(3) bracket outside their plane
  CHECK_THROWS_AS((void)MatrixAlgebra::make({so3[0], so3[1]}), std::exception);
  // dependent input
  CHECK_THROWS_AS((void)MatrixAlgebra::make({so3[0], 2.0 * so3[0]}),
                  std::exception);
  CHECK(MatrixAlgebra::trivial(4).dim() == 0);
}

TEST_CASE("lie_closure grows two rotations into the full algebra") {
  std::vector<MatrixXd> so3 = so_basis(0, 3);
  MatrixAlgebra closed = lie_closure({so3[0], so3[1]});
  CHECK(closed.dim() == 3);
  for (const MatrixXd& b : so3) CHECK(span_residual(closed.basis, b) < 1e-10);
  // a single generator is already closed
  CHECK(lie_closure({so3[2]}).dim() == 1);
}

TEST_CASE("span_residual measures Frobenius distance from the span") {
  std::vector<MatrixXd> span = {rotation_pair(3, 0, 1)};
  CHECK(span_residual(span, 3.0 * rotation_pair(3, 0, 1)) < 1e-14);
  MatrixXd outside = rotation_pair(3, 1, 2);
  CHECK(span_residual(span, outside) ==
        doctest::Approx(outside.norm()).epsilon(1e-12));
}

TEST_CASE("standard stabiliser frame has the block metric") {
  NullFrame f = standard_stab_frame(3);
  CHECK(f.ambient_dim() == 5);
  CHECK(f.v0_dim() == 3);
  MatrixXd g = f.frame_metric();
  CHECK(g(0, 4) == 1.0);
  CHECK(g(4, 0) == 1.0);
  CHECK((g.block(1, 1, 3, 3) - MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK(f.e_minus(0) == 1.0);
  CHECK(f.e_plus(4) == 1.0);
}

TEST_CASE("stab_embed and stab_decompose are mutually inverse") {
  NullFrame frame = standard_stab_frame(2);
  StabElement e;
  e.a = 0.7;
  e.x = 0.3 * rotation_pair(2, 0, 1);
  e.v = VectorXd(2);
  e.v << 0.5, -0.2;
  MatrixXd m = stab_embed(e, frame);
  // embedded matrix is skew for the frame metric and preserves the line
  MatrixXd g = frame.frame_metric();
  CHECK((m.transpose() * g + g * m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((m * frame.e_minus - e.a * frame.e_minus).norm() < 1e-12);
  StabElement back = stab_decompose(m, frame);
  CHECK(back.a == doctest::Approx(0.7).epsilon(1e-10));
  CHECK((back.x - e.x).norm() < 1e-10);
  CHECK((back.v - e.v).norm() < 1e-10);
}

TEST_CASE("stab_decompose rejects matrices that move the null line") {
  NullFrame frame = standard_stab_frame(2);
  MatrixXd g = frame.frame_metric();
  // G^{-1} S is metric-skew for any antisymmetric S; this one moves e-
  MatrixXd s = MatrixXd::Zero(4, 4);
  s(0, 2) = 1;
  s(2, 0) = -1;
  MatrixXd mover = g.inverse() * s;
  CHECK((mover.transpose() * g + g * mover).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS((void)stab_decompose(mover, frame), std::exception);
}

TEST_CASE("stabiliser families have the expected dimensions") {
  StabiliserFamilyParams so2_params;
  so2_params.centre = MatrixAlgebra::make(so_basis(0, 2));
  so2_params.rest = MatrixAlgebra::trivial(2);
  CHECK(stabiliser_family(StabiliserFamily::scaling, 2, so2_params).dim() == 4);
  CHECK(stabiliser_family(StabiliserFamily::no_scaling, 2, so2_params).dim() ==
        3);
  so2_params.scaling_twist = VectorXd::Ones(1);
  CHECK(stabiliser_family(StabiliserFamily::twisted_scaling, 2, so2_params)
            .dim() == 3);

  StabiliserFamilyParams so3_params;
  so3_params.centre = MatrixAlgebra::trivial(3);
  so3_params.rest = MatrixAlgebra::make(so_basis(0, 3));
  CHECK(stabiliser_family(StabiliserFamily::scaling, 3, so3_params).dim() == 7);
  CHECK(stabiliser_family(StabiliserFamily::no_scaling, 3, so3_params).dim() ==
        6);
  // twisted scaling needs a nonzero functional on a nonzero centre
  so3_params.scaling_twist = VectorXd::Zero(0);
  CHECK_THROWS_AS(
      (void)stabiliser_family(StabiliserFamily::twisted_scaling, 3, so3_params),
      std::exception);
}

TEST_CASE("translation-twisted family over a rotation centre") {
  // centre so(2) acting on the first two of three translation directions
  StabiliserFamilyParams params;
  params.centre =
      MatrixAlgebra::make({embed_block(rotation_pair(2, 0, 1), 0, 3)});
  params.rest = MatrixAlgebra::trivial(3);
  params.invariant_translations = MatrixXd::Identity(3, 3).leftCols(2);
  params.translation_twist = MatrixXd::Identity(3, 3).rightCols(1);
  MatrixAlgebra alg =
      stabiliser_family(StabiliserFamily::twisted_translation, 3, params);
  CHECK(alg.dim() == 3);
  NullFrame frame = standard_stab_frame(3);
  // every element annihilates e-
  for (const MatrixXd& m : alg.basis)
    CHECK((m * frame.e_minus).norm() < 1e-12);
  // only the untwisted translation directions survive as pure translations
  SubspaceBasis t = translational_ideal(alg, frame);
  CHECK(t.vectors.cols() == 2);
  // a twist that lands inside the translation space is rejected
  params.translation_twist = MatrixXd::Identity(3, 3).leftCols(1);
  CHECK_THROWS_AS(
      (void)stabiliser_family(StabiliserFamily::twisted_translation, 3, params),
      std::exception);
}

TEST_CASE("translational ideal extracts the pure translations") {
  NullFrame frame = standard_stab_frame(2);
  StabiliserFamilyParams params;
  params.centre = MatrixAlgebra::make(so_basis(0, 2));
  params.rest = MatrixAlgebra::trivial(2);
  MatrixAlgebra alg = stabiliser_family(StabiliserFamily::scaling, 2, params);
  SubspaceBasis t = translational_ideal(alg, frame);
  CHECK(t.ambient_dim == 2);
  CHECK(t.vectors.cols() == 2);
  // so(3) in its defining representation has no translation part
  MatrixAlgebra so3 = MatrixAlgebra::make(so_basis(0, 3));
  NullFrame f3 = standard_stab_frame(1);
  CHECK_THROWS_AS((void)translational_ideal(so3, f3), std::exception);
}

TEST_CASE("conjugation by a translation straightens mixed elements") {
  NullFrame frame = standard_stab_frame(2);
  MatrixXd j = rotation_pair(2, 0, 1);
  VectorXd v0(2);
  v0 << 0.4, -0.3;
  // one-dimensional algebra of elements (X, X v0)
  StabElement mixed;
  mixed.a = 0;
  mixed.x = j;
  mixed.v = j * v0;
  MatrixAlgebra alg = MatrixAlgebra::make({stab_embed(mixed, frame)});
  MatrixAlgebra moved = conjugate_by_translation(alg, v0, frame);
  CHECK(moved.dim() == 1);
  StabElement out = stab_decompose(moved.basis[0], frame);
  double scale = std::abs(out.x(1, 0));
  CHECK(scale > 0.1);  // linear part survives
  CHECK(out.v.cwiseAbs().maxCoeff() < 1e-10 * scale);  // translation removed
}

TEST_CASE("decomposability probe finds block splittings and nothing else") {
  // so(2) embedded in a 4-dimensional space leaves two planes invariant
  MatrixAlgebra block =
      MatrixAlgebra::make({embed_block(rotation_pair(2, 0, 1), 0, 4)});
  DecomposabilityProbe probe =
      decomposability_probe(block, QuadraticSpace::standard(0, 4));
  REQUIRE(probe.invariant_subspace.has_value());
  int d = static_cast<int>(probe.invariant_subspace->vectors.cols());
  CHECK(d >= 1);
  CHECK(d <= 3);
  // the witness is invariant under the generator
  const MatrixXd& w = probe.invariant_subspace->vectors;
  MatrixXd image = block.basis[0] * w;
  MatrixXd q = col_space(w, 1e-10);
  CHECK((image - q * (q.transpose() * image)).cwiseAbs().maxCoeff() < 1e-8);

  // the full rotation algebra acts irreducibly
  MatrixAlgebra so3 = MatrixAlgebra::make(so_basis(0, 3));
  DecomposabilityProbe none =
      decomposability_probe(so3, QuadraticSpace::standard(0, 3));
  CHECK_FALSE(none.invariant_subspace.has_value());
}

TEST_CASE("invariant null line search finds the stabilised line") {
  StabiliserFamilyParams params;
  params.centre = MatrixAlgebra::make(so_basis(0, 2));
  params.rest = MatrixAlgebra::trivial(2);
  MatrixAlgebra alg = stabiliser_family(StabiliserFamily::scaling, 2, params);
  NullFrame frame = standard_stab_frame(2);
  QuadraticSpace space = QuadraticSpace::from_metric(frame.frame_metric());
  auto line = invariant_null_line_search(alg, space);
  REQUIRE(line.has_value());
  CHECK(line->vectors.cols() == 1);
  VectorXd l = line->vectors.col(0);
  CHECK(principal_distance(l, frame.e_minus, 1e-10) < 1e-8);

  // the full Lorentz algebra preserves no line
  MatrixAlgebra so12 = MatrixAlgebra::make(so_basis(1, 2));
  CHECK_FALSE(
      invariant_null_line_search(so12, QuadraticSpace::standard(1, 2))
          .has_value());
}

TEST_CASE("reference labels for irreducible candidates") {
  CHECK(berger_label({1, 2}, 3) == "so(1,2)");
  CHECK(berger_label({0, 4}, 4) == "u(0,2)");
  CHECK(berger_label({0, 3}, 2) == "unrecognized");
  auto cands = berger_candidates({0, 7});
  bool has_g2 = false;
  for (const auto& c : cands) has_g2 = has_g2 || c.name == "g2";
  CHECK(has_g2);
}

}  // TEST_SUITE
