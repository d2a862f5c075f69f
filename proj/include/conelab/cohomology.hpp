#pragma once

#include <vector>

#include "conelab/lie_matrix.hpp"

namespace conelab {

/// Bracket expansion coefficients c[a][b][k] with [X_a, X_b] = sum_k c X_k,
/// antisymmetric in (a, b).
struct StructureConstants {
  int dim = 0;
  std::vector<double> flat;  // a * dim * dim + b * dim + k

  double at(int a, int b, int k) const { return flat[(a * dim + b) * dim + k]; }
  double& at(int a, int b, int k) { return flat[(a * dim + b) * dim + k]; }
  static StructureConstants zero(int dim);
};

/// Expansion of all pairwise brackets of the algebra basis in that basis.
/// Fails with a conditioning error when the re-expansion residual exceeds
/// 1e-9.
StructureConstants structure_constants(const MatrixAlgebra& alg);

/// Killing form entries tr(ad_a ad_b) computed from structure constants.
Eigen::MatrixXd killing_form(const StructureConstants& c);

/// A finite-dimensional module: abstract bracket data for the algebra plus
/// action matrices rho(X_a) on R^mod_dim. make() checks antisymmetry, the
/// Jacobi identity, and the representation property
/// rho([X_a, X_b]) = [rho(X_a), rho(X_b)] to 1e-9.
struct LieModule {
  int alg_dim = 0;
  int mod_dim = 0;
  StructureConstants constants;
  std::vector<Eigen::MatrixXd> action;
  double tol = 1e-9;

  static LieModule make(StructureConstants constants,
                        std::vector<Eigen::MatrixXd> action, double tol = 1e-9);
  /// Defining representation of a matrix algebra on its ambient space.
  static LieModule matrix(const MatrixAlgebra& alg);
  /// Adjoint representation built from structure constants alone.
  static LieModule adjoint(const StructureConstants& constants);
  /// Zero action of an abelian algebra on R^mod_dim.
  static LieModule trivial(int alg_dim, int mod_dim);
};

/// First-cohomology data. A map phi: algebra -> module is stored as a
/// mod_dim x alg_dim matrix whose a-th column is phi(X_a).
struct CohomologyResult {
  std::vector<Eigen::MatrixXd> z1_basis;       // cocycles
  std::vector<Eigen::MatrixXd> b1_basis;       // coboundaries dv = (X -> Xv)
  std::vector<Eigen::MatrixXd> h1_complement;  // complement of B1 inside Z1
  int h1_dim = 0;
  int invariants_dim = 0;  // fixed vectors of the action
};

/// Z1 as the kernel of the cocycle system over all basis pairs, B1 as the
/// image of v -> (X -> Xv), and an orthogonal complement of B1 in Z1 under
/// the Frobenius pairing. dim B1 always equals mod_dim - invariants_dim.
CohomologyResult cohomology(const LieModule& mod);

/// Induced module on V/sub realized in orthonormal-complement coordinates
/// of an auxiliary Euclidean product. sub must be invariant under every
/// action matrix; violations are rejected with the largest residual.
LieModule quotient_module(const LieModule& mod, const SubspaceBasis& sub);

/// Predicted first-cohomology dimension for the line-annihilating
/// stabiliser family over g0 acting on R^n: the sum of the dimensions of
/// the trace-free symmetric commutant of g0, its centre, and its common
/// kernel, each found by a linear solve.
int predicted_h1_dimension(const MatrixAlgebra& g0, int n);

}  // namespace conelab
