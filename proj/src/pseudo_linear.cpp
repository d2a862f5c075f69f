#include "conelab/pseudo_linear.hpp"

#include <cmath>
#include <stdexcept>

#include "conelab/linalg.hpp"

namespace conelab {

namespace {

// Deterministic sign fix: largest-magnitude component (first among ties)
// made positive.
void canonicalize(Eigen::Ref<Eigen::VectorXd> v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-14) best = i;
  if (v(best) < 0) v = -v;
}

}  // namespace

QuadraticSpace QuadraticSpace::standard(int t, int s) {
  QuadraticSpace q;
  q.dim = t + s;
  q.metric = Eigen::MatrixXd::Identity(q.dim, q.dim);
  for (int i = 0; i < t; ++i) q.metric(i, i) = -1.0;
  q.signature = {t, s};
  return q;
}

QuadraticSpace QuadraticSpace::from_metric(const Eigen::MatrixXd& g, double tol) {
  if (g.rows() != g.cols()) throw std::invalid_argument("quadratic space: not square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("quadratic space: metric not symmetric");
  QuadraticSpace q;
  q.dim = static_cast<int>(g.rows());
  q.metric = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.metric);
  const auto& ev = es.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  int t = 0, s = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol * scale)
      throw std::invalid_argument("quadratic space: degenerate metric");
    (ev(i) < 0 ? t : s)++;
  }
  q.signature = {t, s};
  return q;
}

SubspaceBasis SubspaceBasis::make(const Eigen::MatrixXd& vectors, double tol) {
  SubspaceBasis sb;
  sb.ambient_dim = static_cast<int>(vectors.rows());
  sb.vectors = vectors;
  sb.tol = tol;
  if (vectors.cols() > 0 && svd_rank(vectors, tol) != vectors.cols())
    throw std::invalid_argument("subspace: vectors not independent at tol");
  return sb;
}

GramAnalysis gram_analysis(const QuadraticSpace& space, const SubspaceBasis& sub) {
  if (sub.ambient_dim != space.dim)
    throw std::invalid_argument("gram_analysis: dimension mismatch");
  const int k = static_cast<int>(sub.vectors.cols());
  GramAnalysis out;
  if (k == 0) {
    out.rank = 0;
    out.radical = Eigen::MatrixXd(space.dim, 0);
    out.is_nondegenerate = true;
    out.is_totally_null = true;
    return out;
  }
  Eigen::MatrixXd gram = sub.vectors.transpose() * space.metric * sub.vectors;
  // Scale reference: a totally null subspace has a Gram that is zero
  // relative to the sizes of the vectors and the form, not just to itself.
  double scale = space.metric.cwiseAbs().maxCoeff() *
                 sub.vectors.colwise().norm().maxCoeff() *
                 sub.vectors.colwise().norm().maxCoeff();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tau = sub.tol * std::max(sv.size() ? sv(0) : 0.0, scale);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau) ++r;
  out.rank = r;
  out.radical = sub.vectors * svd.matrixV().rightCols(k - r);
  out.is_nondegenerate = (r == k);
  out.is_totally_null = (r == 0);
  return out;
}

Eigen::MatrixXd NullFrame::basis_matrix() const {
  const int n = ambient_dim();
  Eigen::MatrixXd B(n, n);
  B.col(0) = e_minus;
  for (int i = 0; i < v0_dim(); ++i) B.col(1 + i) = v0_basis.col(i);
  B.col(n - 1) = e_plus;
  return B;
}

Eigen::MatrixXd NullFrame::frame_metric() const {
  const int n = ambient_dim();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  S(0, n - 1) = S(n - 1, 0) = 1.0;
  for (int i = 0; i < v0_dim(); ++i) S(1 + i, 1 + i) = v0_signs(i);
  return S;
}

OrthonormalizedSubspace orthonormalize_subspace(const Eigen::MatrixXd& metric,
                                                const Eigen::MatrixXd& span_cols,
                                                double tol) {
  const int k = static_cast<int>(span_cols.cols());
  Eigen::MatrixXd gram = span_cols.transpose() * metric * span_cols;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const auto& ev = es.eigenvalues();
  double scale = k ? ev.cwiseAbs().maxCoeff() : 0.0;
  OrthonormalizedSubspace out;
  out.basis.resize(span_cols.rows(), k);
  out.signs.resize(k);
  for (int i = 0; i < k; ++i) {
    if (std::abs(ev(i)) <= tol * scale)
      throw std::invalid_argument("orthonormalize: degenerate restriction");
    Eigen::VectorXd w = span_cols * es.eigenvectors().col(i) / std::sqrt(std::abs(ev(i)));
    canonicalize(w);
    out.basis.col(i) = w;
    out.signs(i) = ev(i) < 0 ? -1.0 : 1.0;
  }
  return out;
}

NullFrame null_frame(const QuadraticSpace& space) {
  if (space.signature.t < 1 || space.signature.s < 1)
    throw std::invalid_argument("null_frame: needs at least signature (1,1)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(space.metric);
  const auto& ev = es.eigenvalues();  // ascending: most timelike first
  const int n = space.dim;
  auto unit = [&](int i) {
    Eigen::VectorXd w = es.eigenvectors().col(i) / std::sqrt(std::abs(ev(i)));
    canonicalize(w);
    return w;
  };
  Eigen::VectorXd wm = unit(0);       // g(wm, wm) = -1
  Eigen::VectorXd wp = unit(n - 1);   // g(wp, wp) = +1
  NullFrame fr;
  fr.e_minus = (wm + wp) / std::sqrt(2.0);
  fr.e_plus = (wp - wm) / std::sqrt(2.0);
  fr.v0_basis.resize(n, n - 2);
  fr.v0_signs.resize(n - 2);
  for (int i = 1; i < n - 1; ++i) {
    fr.v0_basis.col(i - 1) = unit(i);
    fr.v0_signs(i - 1) = ev(i) < 0 ? -1.0 : 1.0;
  }
  return fr;
}

NullFrame frame_from_null_pair(const QuadraticSpace& space, int minus_index,
                               int plus_index, double tol) {
  const int n = space.dim;
  if (minus_index == plus_index || minus_index < 0 || plus_index < 0 ||
      minus_index >= n || plus_index >= n)
    throw std::invalid_argument("frame_from_null_pair: bad indices");
  const Eigen::MatrixXd& g = space.metric;
  Eigen::VectorXd em = Eigen::VectorXd::Unit(n, minus_index);
  Eigen::VectorXd ep = Eigen::VectorXd::Unit(n, plus_index);
  double c = em.dot(g * ep);
  if (std::abs(em.dot(g * em)) > tol || std::abs(ep.dot(g * ep)) > tol ||
      std::abs(c) <= tol)
    throw std::invalid_argument("frame_from_null_pair: not a null pair");
  ep /= c;
  Eigen::MatrixXd rest(n, n - 2);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    if (i == minus_index || i == plus_index) continue;
    Eigen::VectorXd w = Eigen::VectorXd::Unit(n, i);
    // Remove the null-pair components using the dual relations of (e-, e+).
    w -= (w.dot(g * ep)) * em + (w.dot(g * em)) * ep;
    rest.col(idx++) = w;
  }
  auto on = orthonormalize_subspace(g, rest, tol);
  NullFrame fr;
  fr.e_minus = em;
  fr.e_plus = ep;
  fr.v0_basis = on.basis;
  fr.v0_signs = on.signs;
  // Validate the frame relations.
  Eigen::MatrixXd B = fr.basis_matrix();
  if ((B.transpose() * g * B - fr.frame_metric()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("frame_from_null_pair: frame relations violated");
  return fr;
}

}  // namespace conelab
