#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace conelab {

/// Global rank rule: singular values at or below tol * sigma_max count as
/// zero. Used everywhere a span/kernel dimension is decided.
int svd_rank(const Eigen::MatrixXd& A, double tol);

/// Orthonormal basis (columns) of the column span of A under the rank rule.
Eigen::MatrixXd col_space(const Eigen::MatrixXd& A, double tol);

/// Orthonormal basis (columns) of ker A under the rank rule.
Eigen::MatrixXd kernel(const Eigen::MatrixXd& A, double tol);

/// Spectral-norm distance between the orthogonal projectors onto the two
/// column spans: sin of the largest principal angle when dimensions agree,
/// 1 when they differ, 0 for two empty spans.
double principal_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double tol);

/// Stack matrices as rows of vectorized entries (row-major flattening).
Eigen::MatrixXd stack_vectorized(const std::vector<Eigen::MatrixXd>& ms);
Eigen::MatrixXd unvectorize(const Eigen::VectorXd& v, int rows, int cols);

/// Halton low-discrepancy point; bases are the first `dim` primes and the
/// sequence index is 1-based.
Eigen::VectorXd halton_point(std::uint64_t index, int dim);

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// Legendre recurrence (deterministic, ~1e-15).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace conelab
