#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conelab/pseudo_linear.hpp"

namespace conelab {

/// Finite-dimensional matrix Lie algebra: a linearly independent basis
/// whose pairwise brackets stay in its span. make() validates both
/// invariants under the rank rule at tol.
struct MatrixAlgebra {
  int ambient_dim = 0;
  std::vector<Eigen::MatrixXd> basis;
  double tol = 1e-8;

  int dim() const { return static_cast<int>(basis.size()); }

  static MatrixAlgebra make(std::vector<Eigen::MatrixXd> basis, double tol = 1e-8);
  /// Algebra with no elements (useful as an empty linear part).
  static MatrixAlgebra trivial(int ambient_dim, double tol = 1e-8);
};

/// Euclidean (Frobenius) distance of M from the span of the algebra basis.
double span_residual(const std::vector<Eigen::MatrixXd>& span,
                     const Eigen::MatrixXd& m);

/// Smallest bracket-closed span containing the generators. Iterates
/// bracketing rounds until the dimension stabilizes; a failure to
/// stabilize within ambient_dim^2 rounds raises a numerical-instability
/// error.
MatrixAlgebra lie_closure(const std::vector<Eigen::MatrixXd>& generators,
                          double tol = 1e-8);

/// Standard basis of the skew matrices for diag(-1 x t, +1 x s).
std::vector<Eigen::MatrixXd> so_basis(int t, int s);

/// An element of the stabiliser of the null line R e- inside the skew
/// algebra of a null frame, in block coordinates (e-, V0, e+):
///   [[ a, -(G0 v)^T,  0 ],
///    [ 0,     X,      v ],
///    [ 0,     0,     -a ]]
/// with X skew with respect to the V0 Gram matrix G0.
struct StabElement {
  double a = 0;
  Eigen::MatrixXd x;
  Eigen::VectorXd v;
};

/// Ambient matrix of a stabiliser element through the frame's basis.
Eigen::MatrixXd stab_embed(const StabElement& e, const NullFrame& frame);

/// Inverse of stab_embed: extracts (a, X, v) and validates that M is skew
/// and preserves the line through e-; the re-embedded matrix agrees with M
/// to 1e-10 or the call is rejected with the residual in the message.
StabElement stab_decompose(const Eigen::MatrixXd& m, const NullFrame& frame,
                           double tol = 1e-8);

/// Basis of T = {v : the pure translation (0,0,v) lies in alg}, together
/// with verification that T is a bracket ideal of alg invariant under the
/// linear parts (residual < 1e-9, else an error is raised).
SubspaceBasis translational_ideal(const MatrixAlgebra& alg,
                                  const NullFrame& frame);

/// Conjugates every basis element by the null-translation
///   A_v = [[1, -(G0 v)^T, -g(v,v)/2], [0, I, v], [0, 0, 1]]
/// (frame block coordinates). Sends {(X, w = Xv)} to {(X, 0)}; preserves
/// dimension and brackets.
MatrixAlgebra conjugate_by_translation(const MatrixAlgebra& alg,
                                       const Eigen::VectorXd& v,
                                       const NullFrame& frame);

/// Invariant nondegenerate proper subspace search through the commutant:
/// solves [A, C] = 0 for all basis elements A together with
/// self-adjointness of C as one linear system; a non-scalar solution's
/// real eigenspaces are tested for invariance and nondegeneracy. An empty
/// result is a probe-level indecomposability certificate, not a proof.
struct DecomposabilityProbe {
  std::optional<SubspaceBasis> invariant_subspace;
  /// Set when the commutant solve had singular values within a factor 10
  /// of the rank cutoff.
  bool tolerance_warning = false;
};
DecomposabilityProbe decomposability_probe(const MatrixAlgebra& alg,
                                           const QuadraticSpace& space);

/// Heuristic search for a common null eigenline: eigenvectors of eight
/// deterministic pseudo-random generator combinations, each candidate
/// verified exactly (A l parallel to l for every basis element, g(l,l)
/// ~ 0). Absence of a result is not a disproof. Requires at least one
/// timelike direction.
std::optional<SubspaceBasis> invariant_null_line_search(
    const MatrixAlgebra& alg, const QuadraticSpace& space);

/// The standard frame for stabiliser constructions on R^{1, n+1}: ambient
/// metric [[0,0,1],[0,I_n,0],[1,0,0]], e- the first and e+ the last basis
/// vector.
NullFrame standard_stab_frame(int n);

/// The four families of indecomposable subalgebras of so(1, n+1) that
/// stabilise the null line R e-, each built over a linear part acting on
/// V0 = R^n (centre passed separately because two families twist it):
///   scaling:             (R + g0) |x V0            -- full scaling part
///   no_scaling:          g0 |x V0                  -- annihilates e-
///   twisted_scaling:     {(f(Z), Z, 0)} + g0' |x V0, f in centre* nonzero
///   twisted_translation: {(0, Z, f(Z))} + g0' |x T0, f: centre -> T0-perp
///                        surjective, T0 a proper invariant subspace
struct StabiliserFamilyParams {
  MatrixAlgebra centre;  // abelian, commutes with rest
  MatrixAlgebra rest;
  Eigen::VectorXd scaling_twist;       // twisted_scaling: f(Z_i)
  Eigen::MatrixXd translation_twist;   // twisted_translation: columns f(Z_i)
  Eigen::MatrixXd invariant_translations;  // twisted_translation: T0 columns
};
enum class StabiliserFamily {
  scaling,
  no_scaling,
  twisted_scaling,
  twisted_translation,
};
MatrixAlgebra stabiliser_family(StabiliserFamily kind, int n,
                                const StabiliserFamilyParams& params);

/// Reference dimensions of the candidate irreducible holonomy algebras in
/// a given ambient signature, used only to label computed spans.
struct BergerEntry {
  std::string name;
  Signature signature;
  int dim = 0;
};
std::vector<BergerEntry> berger_candidates(const Signature& ambient);
/// Comma-joined names of candidates matching (ambient, dim), or
/// "unrecognized".
std::string berger_label(const Signature& ambient, int dim);

}  // namespace conelab
