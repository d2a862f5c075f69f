#include "conelab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace conelab {

int svd_rank(const Eigen::MatrixXd& A, double tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  double tau = tol * s(0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return r;
}

Eigen::MatrixXd col_space(const Eigen::MatrixXd& A, double tol) {
  if (A.size() == 0) return Eigen::MatrixXd(A.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return Eigen::MatrixXd(A.rows(), 0);
  double tau = tol * s(0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd kernel(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() == 0 || A.cols() == 0)
    return Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double tau = (s.size() && s(0) > 0.0) ? tol * s(0) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return svd.matrixV().rightCols(A.cols() - r);
}

double principal_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double tol) {
  Eigen::MatrixXd Ua = col_space(A, tol), Ub = col_space(B, tol);
  if (Ua.cols() == 0 && Ub.cols() == 0) return 0.0;
  Eigen::MatrixXd Pa = Ua * Ua.transpose(), Pb = Ub * Ub.transpose();
  if (Pa.size() == 0) Pa = Eigen::MatrixXd::Zero(Ub.rows(), Ub.rows());
  if (Pb.size() == 0) Pb = Eigen::MatrixXd::Zero(Ua.rows(), Ua.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Pa - Pb);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Eigen::MatrixXd stack_vectorized(const std::vector<Eigen::MatrixXd>& ms) {
  if (ms.empty()) return Eigen::MatrixXd(0, 0);
  const int n = static_cast<int>(ms[0].rows() * ms[0].cols());
  Eigen::MatrixXd out(static_cast<int>(ms.size()), n);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    int idx = 0;
    for (int i = 0; i < ms[k].rows(); ++i)
      for (int j = 0; j < ms[k].cols(); ++j) out(static_cast<int>(k), idx++) = ms[k](i, j);
  }
  return out;
}

Eigen::MatrixXd unvectorize(const Eigen::VectorXd& v, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(idx++);
  return m;
}

namespace {
int nth_prime(int n) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (n < 0 || n >= static_cast<int>(sizeof(primes) / sizeof(int)))
    throw std::invalid_argument("halton: dimension too large");
  return primes[n];
}
}  // namespace

Eigen::VectorXd halton_point(std::uint64_t index, int dim) {
  Eigen::VectorXd p(dim);
  for (int d = 0; d < dim; ++d) {
    const int b = nth_prime(d);
    double f = 1.0, r = 0.0;
    std::uint64_t i = index;
    while (i > 0) {
      f /= b;
      r += f * static_cast<double>(i % b);
      i /= b;
    }
    p(d) = r;
  }
  return p;
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace conelab
