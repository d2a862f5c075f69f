#pragma once

#include <Eigen/Dense>

namespace conelab {

struct Signature {
  int t = 0;  // timelike (negative) directions
  int s = 0;  // spacelike (positive) directions
  bool operator==(const Signature&) const = default;
};

/// Finite-dimensional real vector space with a nondegenerate symmetric
/// bilinear form. Construction validates symmetry and counts the
/// eigenvalue signs; a zero eigenvalue (under the rank rule) is rejected.
struct QuadraticSpace {
  int dim = 0;
  Eigen::MatrixXd metric;
  Signature signature;

  static QuadraticSpace standard(int t, int s);
  static QuadraticSpace from_metric(const Eigen::MatrixXd& g, double tol = 1e-8);
};

/// A list of linearly independent vectors spanning a subspace.
struct SubspaceBasis {
  int ambient_dim = 0;
  Eigen::MatrixXd vectors;  // columns
  double tol = 1e-8;

  static SubspaceBasis make(const Eigen::MatrixXd& vectors, double tol = 1e-8);
};

struct GramAnalysis {
  int rank = 0;
  Eigen::MatrixXd radical;  // columns: ambient vectors spanning the radical
  bool is_nondegenerate = false;
  bool is_totally_null = false;
};

/// Restriction of the form to the subspace: rank, radical, degeneracy flags.
GramAnalysis gram_analysis(const QuadraticSpace& space, const SubspaceBasis& sub);

/// Ordered Witt-style frame (e-, v0 basis, e+):
///   g(e-,e-) = g(e+,e+) = 0, g(e-,e+) = 1, v0 orthogonal to both with
///   Gram diag(-1..,+1..) (timelike columns first). Deterministic: built
///   from the metric eigen-decomposition with canonicalized signs.
struct NullFrame {
  Eigen::VectorXd e_minus, e_plus;
  Eigen::MatrixXd v0_basis;   // columns
  Eigen::VectorXd v0_signs;   // g(v_i, v_i) per column

  int ambient_dim() const { return static_cast<int>(e_minus.size()); }
  int v0_dim() const { return static_cast<int>(v0_basis.cols()); }
  /// Change-of-basis matrix with columns (e-, v0..., e+).
  Eigen::MatrixXd basis_matrix() const;
  /// The form expressed in frame coordinates ([[0,0,1],[0,G0,0],[1,0,0]]).
  Eigen::MatrixXd frame_metric() const;
};

/// Requires at least one timelike and one spacelike direction.
NullFrame null_frame(const QuadraticSpace& space);

/// Explicit frame for a space whose metric is already in the block form of
/// frame coordinates with e- = basis vector `minus_index`, e+ = basis
/// vector `plus_index`: used by chart-level analyses where the null pair
/// is geometrically distinguished rather than chosen by eigenvectors.
NullFrame frame_from_null_pair(const QuadraticSpace& space, int minus_index,
                               int plus_index, double tol = 1e-8);

/// Pseudo-orthonormal basis of a nondegenerate subspace: columns with Gram
/// diag(signs), timelike first.
struct OrthonormalizedSubspace {
  Eigen::MatrixXd basis;
  Eigen::VectorXd signs;
};
OrthonormalizedSubspace orthonormalize_subspace(const Eigen::MatrixXd& metric,
                                                const Eigen::MatrixXd& span_cols,
                                                double tol = 1e-8);

}  // namespace conelab
