#include "conelab/lie_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "conelab/linalg.hpp"

namespace conelab {

namespace {

Eigen::VectorXd vec_row_major(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  int k = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

Eigen::MatrixXd bracket(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

void check_square_equal(const std::vector<Eigen::MatrixXd>& ms) {
  if (ms.empty()) throw std::invalid_argument("matrix algebra: empty basis");
  const Eigen::Index n = ms.front().rows();
  for (const Eigen::MatrixXd& m : ms)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument(
          "matrix algebra: elements must be square of equal size");
}

}  // namespace

double span_residual(const std::vector<Eigen::MatrixXd>& span,
                     const Eigen::MatrixXd& m) {
  if (span.empty()) return m.norm();
  Eigen::MatrixXd cols = stack_vectorized(span).transpose();
  Eigen::MatrixXd q = col_space(cols, 1e-12);
  Eigen::VectorXd v = vec_row_major(m);
  return (v - q * (q.transpose() * v)).norm();
}

MatrixAlgebra MatrixAlgebra::make(std::vector<Eigen::MatrixXd> basis,
                                  double tol) {
  check_square_equal(basis);
  MatrixAlgebra alg;
  alg.ambient_dim = static_cast<int>(basis.front().rows());
  alg.tol = tol;
  Eigen::MatrixXd stacked = stack_vectorized(basis).transpose();
  if (svd_rank(stacked, tol) != static_cast<int>(basis.size()))
    throw std::invalid_argument(
        "matrix algebra: basis is linearly dependent at the given tolerance");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      Eigen::MatrixXd b = bracket(basis[i], basis[j]);
      double r = span_residual(basis, b);
      if (r > tol * std::max(1.0, b.norm()))
        throw std::invalid_argument(
            "matrix algebra: basis is not bracket-closed (residual " +
            std::to_string(r) + ")");
    }
  alg.basis = std::move(basis);
  return alg;
}

MatrixAlgebra MatrixAlgebra::trivial(int ambient_dim, double tol) {
  MatrixAlgebra alg;
  alg.ambient_dim = ambient_dim;
  alg.tol = tol;
  return alg;
}

MatrixAlgebra lie_closure(const std::vector<Eigen::MatrixXd>& generators,
                          double tol) {
  check_square_equal(generators);
  const int n = static_cast<int>(generators.front().rows());
  MatrixAlgebra alg;
  alg.ambient_dim = n;
  alg.tol = tol;

  Eigen::MatrixXd q(n * n, 0);
  auto try_add = [&](const Eigen::MatrixXd& m) {
    Eigen::VectorXd v = vec_row_major(m);
    Eigen::VectorXd r = q.cols() ? (v - q * (q.transpose() * v)).eval() : v;
    if (r.norm() <= tol * std::max(1.0, v.norm())) return false;
    alg.basis.push_back(m / m.norm());
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = r.normalized();
    return true;
  };

  for (const Eigen::MatrixXd& g : generators) try_add(g);
  std::size_t prev = 0;
  for (int round = 0; round <= n * n; ++round) {
    const std::size_t sz = alg.basis.size();
    bool grew = false;
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = std::max(i + 1, prev); j < sz; ++j)
        grew |= try_add(bracket(alg.basis[i], alg.basis[j]));
    prev = sz;
    if (!grew) return alg;
  }
  throw std::runtime_error(
      "lie closure: bracketing did not stabilize within the iteration cap");
}

std::vector<Eigen::MatrixXd> so_basis(int t, int s) {
  const int n = t + s;
  Eigen::VectorXd eta(n);
  for (int i = 0; i < n; ++i) eta(i) = i < t ? -1.0 : 1.0;
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
      m(i, j) = eta(j);
      m(j, i) = -eta(i);
      basis.push_back(m);
    }
  return basis;
}

namespace {

Eigen::MatrixXd stab_block(const StabElement& e, const Eigen::VectorXd& signs) {
  const int n = static_cast<int>(e.v.size());
  const int N = n + 2;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(N, N);
  b(0, 0) = e.a;
  b(N - 1, N - 1) = -e.a;
  b.block(0, 1, 1, n) = -(signs.asDiagonal() * e.v).transpose();
  b.block(1, 1, n, n) = e.x;
  b.block(1, N - 1, n, 1) = e.v;
  return b;
}

}  // namespace

Eigen::MatrixXd stab_embed(const StabElement& e, const NullFrame& frame) {
  const int n = frame.v0_dim();
  if (e.x.rows() != n || e.x.cols() != n || e.v.size() != n)
    throw std::invalid_argument("stabiliser element: size mismatch with frame");
  Eigen::MatrixXd g0 = frame.v0_signs.asDiagonal();
  double skew = (e.x.transpose() * g0 + g0 * e.x).cwiseAbs().maxCoeff();
  if (skew > 1e-10 * (1.0 + e.x.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "stabiliser element: linear part is not skew (residual " +
        std::to_string(skew) + ")");
  Eigen::MatrixXd c = frame.basis_matrix();
  return c * stab_block(e, frame.v0_signs) * c.inverse();
}

StabElement stab_decompose(const Eigen::MatrixXd& m, const NullFrame& frame,
                           double tol) {
  const int n = frame.v0_dim();
  const int N = n + 2;
  if (m.rows() != N || m.cols() != N)
    throw std::invalid_argument("stabiliser decomposition: size mismatch");
  Eigen::MatrixXd c = frame.basis_matrix();
  Eigen::MatrixXd b = c.inverse() * m * c;
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();

  Eigen::MatrixXd s = frame.frame_metric();
  double skew = (b.transpose() * s + s * b).cwiseAbs().maxCoeff();
  if (skew > tol * scale)
    throw std::invalid_argument(
        "stabiliser decomposition: matrix is not skew (residual " +
        std::to_string(skew) + ")");

  double line = b.col(0).tail(N - 1).cwiseAbs().maxCoeff();
  if (line > tol * scale)
    throw std::runtime_error(
        "stabiliser decomposition: matrix moves the null line (residual " +
        std::to_string(line) + ")");

  StabElement e;
  e.a = b(0, 0);
  e.x = b.block(1, 1, n, n);
  e.v = b.block(1, N - 1, n, 1);
  double rt = (b - stab_block(e, frame.v0_signs)).cwiseAbs().maxCoeff();
  if (rt > tol * scale)
    throw std::runtime_error(
        "stabiliser decomposition: matrix is outside the stabiliser block "
        "form (residual " +
        std::to_string(rt) + ")");
  return e;
}

SubspaceBasis translational_ideal(const MatrixAlgebra& alg,
                                  const NullFrame& frame) {
  const int n = frame.v0_dim();
  const int N = n + 2;
  if (alg.ambient_dim != N)
    throw std::invalid_argument("translational ideal: frame/algebra mismatch");
  std::vector<StabElement> elems;
  for (const Eigen::MatrixXd& m : alg.basis)
    elems.push_back(stab_decompose(m, frame, alg.tol));

  // Translation directions whose embedding lies in the span of the algebra.
  Eigen::MatrixXd span = Eigen::MatrixXd::Zero(N * N, 0);
  if (!alg.basis.empty()) span = stack_vectorized(alg.basis).transpose();
  Eigen::MatrixXd q = col_space(span, 1e-12);
  Eigen::MatrixXd l(N * N, n);
  for (int k = 0; k < n; ++k) {
    StabElement t;
    t.a = 0;
    t.x = Eigen::MatrixXd::Zero(n, n);
    t.v = Eigen::VectorXd::Unit(n, k);
    l.col(k) = vec_row_major(stab_embed(t, frame));
  }
  Eigen::MatrixXd off = l - q * (q.transpose() * l);
  // Absolute cutoff: when every translation lies inside the algebra the
  // residual matrix is numerically zero and a relative rank rule would
  // keep all of its noise singular values.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(off, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > alg.tol) ++rank;
  Eigen::MatrixXd t_basis = svd.matrixV().rightCols(n - rank);

  if (t_basis.cols() > 0) {
    for (const StabElement& e : elems) {
      Eigen::MatrixXd image =
          (e.x + e.a * Eigen::MatrixXd::Identity(n, n)) * t_basis;
      Eigen::MatrixXd out = image - t_basis * (t_basis.transpose() * image);
      double r = out.cwiseAbs().maxCoeff();
      if (r > 1e-9 * (1.0 + image.cwiseAbs().maxCoeff()))
        throw std::runtime_error(
            "translational ideal: bracket escapes the translation space "
            "(residual " +
            std::to_string(r) + ")");
    }
  }
  return SubspaceBasis::make(t_basis, alg.tol);
}

MatrixAlgebra conjugate_by_translation(const MatrixAlgebra& alg,
                                       const Eigen::VectorXd& v,
                                       const NullFrame& frame) {
  const int n = frame.v0_dim();
  const int N = n + 2;
  Eigen::MatrixXd g0 = frame.v0_signs.asDiagonal();
  auto translation = [&](const Eigen::VectorXd& w) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(N, N);
    a.block(0, 1, 1, n) = -(g0 * w).transpose();
    a(0, N - 1) = -0.5 * w.dot(g0 * w);
    a.block(1, N - 1, n, 1) = w;
    return a;
  };
  Eigen::MatrixXd c = frame.basis_matrix();
  Eigen::MatrixXd cinv = c.inverse();
  Eigen::MatrixXd amb = c * translation(v) * cinv;
  Eigen::MatrixXd amb_inv = c * translation(-v) * cinv;
  MatrixAlgebra out;
  out.ambient_dim = alg.ambient_dim;
  out.tol = alg.tol;
  for (const Eigen::MatrixXd& m : alg.basis)
    out.basis.push_back(amb * m * amb_inv);
  return out;
}

DecomposabilityProbe decomposability_probe(const MatrixAlgebra& alg,
                                           const QuadraticSpace& space) {
  const int N = alg.ambient_dim;
  const Eigen::MatrixXd& g = space.metric;
  for (const Eigen::MatrixXd& a : alg.basis) {
    double skew = (a.transpose() * g + g * a).cwiseAbs().maxCoeff();
    if (skew > alg.tol * (1.0 + a.cwiseAbs().maxCoeff()))
      throw std::invalid_argument(
          "decomposability probe: algebra is not skew for the given metric");
  }

  // Stacked system: [A, C] = 0 for every basis element plus C self-adjoint
  // (C^T G = G C), unknowns the row-major entries of C.
  const int n2 = N * N;
  const int rows = (alg.dim() + 1) * n2;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(rows, n2);
  int r0 = 0;
  for (const Eigen::MatrixXd& a : alg.basis) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        int row = r0 + i * N + j;
        for (int k = 0; k < N; ++k) {
          sys(row, k * N + j) += a(i, k);
          sys(row, i * N + k) -= a(k, j);
        }
      }
    r0 += n2;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      int row = r0 + i * N + j;
      for (int k = 0; k < N; ++k) {
        sys(row, k * N + i) += g(k, j);
        sys(row, k * N + j) -= g(i, k);
      }
    }

  DecomposabilityProbe probe;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  double cutoff = alg.tol * (sv.size() ? sv(0) : 0.0);
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff / 10 && sv(i) < cutoff * 10) probe.tolerance_warning = true;
  Eigen::MatrixXd k = kernel(sys, alg.tol);
  if (k.cols() <= 1) return probe;

  std::vector<Eigen::VectorXd> candidates;
  for (int t = 0; t < k.cols(); ++t) candidates.push_back(k.col(t));
  for (int extra = 1; extra <= 4; ++extra) {
    Eigen::VectorXd h = halton_point(extra, static_cast<int>(k.cols()));
    candidates.push_back(k * (2.0 * h.array() - 1.0).matrix());
  }

  for (const Eigen::VectorXd& cv : candidates) {
    Eigen::MatrixXd c = unvectorize(cv, N, N);
    c -= (c.trace() / N) * Eigen::MatrixXd::Identity(N, N);
    if (c.norm() < 1e-10) continue;
    c /= c.norm();
    Eigen::EigenSolver<Eigen::MatrixXd> es(c);
    std::vector<double> seen;
    for (int e = 0; e < N; ++e) {
      std::complex<double> ev = es.eigenvalues()(e);
      if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev))) continue;
      double lambda = ev.real();
      bool dup = false;
      for (double s : seen) dup |= std::abs(s - lambda) < 1e-8;
      if (dup) continue;
      seen.push_back(lambda);
      Eigen::MatrixXd shifted =
          c - lambda * Eigen::MatrixXd::Identity(N, N);
      Eigen::MatrixXd w = kernel(shifted, 1e-6);
      if (w.cols() == 0 || w.cols() == N) continue;
      bool invariant = true;
      for (const Eigen::MatrixXd& a : alg.basis) {
        Eigen::MatrixXd img = a * w;
        double res = (img - w * (w.transpose() * img)).cwiseAbs().maxCoeff();
        if (res > 1e-6 * (1.0 + img.cwiseAbs().maxCoeff())) invariant = false;
      }
      if (!invariant) continue;
      SubspaceBasis sub = SubspaceBasis::make(w, alg.tol);
      if (gram_analysis(space, sub).is_nondegenerate) {
        probe.invariant_subspace = std::move(sub);
        return probe;
      }
    }
  }
  return probe;
}

std::optional<SubspaceBasis> invariant_null_line_search(
    const MatrixAlgebra& alg, const QuadraticSpace& space) {
  if (space.signature.t < 1)
    throw std::invalid_argument(
        "null line search: the form has no null vectors");
  if (alg.dim() == 0) return std::nullopt;
  const int N = alg.ambient_dim;
  const double tol = std::max(alg.tol, 1e-8);

  std::mt19937_64 rng(0x51ab1e11ULL);
  auto coeff = [&rng]() {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
  };

  for (int trial = 0; trial < 8; ++trial) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
    for (const Eigen::MatrixXd& a : alg.basis) m += coeff() * a;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    for (int e = 0; e < N; ++e) {
      std::complex<double> ev = es.eigenvalues()(e);
      if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev))) continue;
      Eigen::VectorXd cand = es.eigenvectors().col(e).real();
      if (cand.norm() < 1e-8) cand = es.eigenvectors().col(e).imag();
      if (cand.norm() < 1e-8) continue;
      cand.normalize();
      bool ok = true;
      for (const Eigen::MatrixXd& a : alg.basis) {
        Eigen::VectorXd img = a * cand;
        Eigen::VectorXd off = img - img.dot(cand) * cand;
        if (off.norm() > tol * (1.0 + img.norm())) ok = false;
      }
      if (!ok) continue;
      if (std::abs(cand.dot(space.metric * cand)) >
          1e-7 * (1.0 + space.metric.cwiseAbs().maxCoeff()))
        continue;
      return SubspaceBasis::make(cand, alg.tol);
    }
  }
  return std::nullopt;
}

NullFrame standard_stab_frame(int n) {
  const int N = n + 2;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(N, N);
  s(0, N - 1) = s(N - 1, 0) = 1.0;
  s.block(1, 1, n, n).setIdentity();
  return frame_from_null_pair(QuadraticSpace::from_metric(s), 0, N - 1);
}

MatrixAlgebra stabiliser_family(StabiliserFamily kind, int n,
                                const StabiliserFamilyParams& params) {
  NullFrame frame = standard_stab_frame(n);
  auto embed = [&](double a, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& v) {
    StabElement e;
    e.a = a;
    e.x = x;
    e.v = v;
    return stab_embed(e, frame);
  };
  const Eigen::MatrixXd zero_x = Eigen::MatrixXd::Zero(n, n);
  const Eigen::VectorXd zero_v = Eigen::VectorXd::Zero(n);

  const std::vector<Eigen::MatrixXd>& centre = params.centre.basis;
  const std::vector<Eigen::MatrixXd>& rest = params.rest.basis;
  for (const Eigen::MatrixXd& z : centre) {
    for (const Eigen::MatrixXd& other : centre)
      if ((z * other - other * z).norm() > 1e-10)
        throw std::invalid_argument("stabiliser family: centre not abelian");
    for (const Eigen::MatrixXd& y : rest)
      if ((z * y - y * z).norm() > 1e-10)
        throw std::invalid_argument("stabiliser family: centre not central");
  }
  const int c = static_cast<int>(centre.size());

  std::vector<Eigen::MatrixXd> basis;
  switch (kind) {
    case StabiliserFamily::scaling:
      basis.push_back(embed(1.0, zero_x, zero_v));
      [[fallthrough]];
    case StabiliserFamily::no_scaling: {
      for (const Eigen::MatrixXd& z : centre) basis.push_back(embed(0, z, zero_v));
      for (const Eigen::MatrixXd& y : rest) basis.push_back(embed(0, y, zero_v));
      for (int k = 0; k < n; ++k)
        basis.push_back(embed(0, zero_x, Eigen::VectorXd::Unit(n, k)));
      break;
    }
    case StabiliserFamily::twisted_scaling: {
      if (c == 0 || params.scaling_twist.size() != c)
        throw std::invalid_argument(
            "stabiliser family: twist functional does not match the centre");
      if (params.scaling_twist.cwiseAbs().maxCoeff() < 1e-12)
        throw std::invalid_argument(
            "stabiliser family: twist functional vanishes on the centre");
      for (int i = 0; i < c; ++i)
        basis.push_back(embed(params.scaling_twist(i), centre[i], zero_v));
      for (const Eigen::MatrixXd& y : rest) basis.push_back(embed(0, y, zero_v));
      for (int k = 0; k < n; ++k)
        basis.push_back(embed(0, zero_x, Eigen::VectorXd::Unit(n, k)));
      break;
    }
    case StabiliserFamily::twisted_translation: {
      const Eigen::MatrixXd& t0 = params.invariant_translations;
      const Eigen::MatrixXd& f = params.translation_twist;
      if (c == 0 || f.cols() != c || f.rows() != n)
        throw std::invalid_argument(
            "stabiliser family: twist map does not match the centre");
      if (t0.rows() != n || t0.cols() == 0 || t0.cols() >= n)
        throw std::invalid_argument(
            "stabiliser family: translation space must be proper and nonzero");
      Eigen::MatrixXd q = col_space(t0, 1e-10);
      for (const Eigen::MatrixXd& x : centre)
        if ((x * t0 - q * (q.transpose() * (x * t0))).norm() > 1e-9)
          throw std::invalid_argument(
              "stabiliser family: translation space is not invariant");
      for (const Eigen::MatrixXd& x : rest)
        if ((x * t0 - q * (q.transpose() * (x * t0))).norm() > 1e-9)
          throw std::invalid_argument(
              "stabiliser family: translation space is not invariant");
      if ((q.transpose() * f).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument(
            "stabiliser family: twist map must take values in the "
            "complement of the translation space");
      if (svd_rank(f, 1e-10) != n - static_cast<int>(t0.cols()))
        throw std::invalid_argument(
            "stabiliser family: twist map must cover the complement of the "
            "translation space");
      for (int i = 0; i < c; ++i)
        basis.push_back(embed(0, centre[i], f.col(i)));
      for (const Eigen::MatrixXd& y : rest) basis.push_back(embed(0, y, zero_v));
      for (int k = 0; k < t0.cols(); ++k)
        basis.push_back(embed(0, zero_x, t0.col(k)));
      break;
    }
  }
  return MatrixAlgebra::make(std::move(basis), 1e-8);
}

std::vector<BergerEntry> berger_candidates(const Signature& ambient) {
  const int t = ambient.t, s = ambient.s, n = t + s;
  std::vector<BergerEntry> out;
  auto name2 = [](const std::string& base, int p, int q) {
    return base + "(" + std::to_string(p) + "," + std::to_string(q) + ")";
  };
  out.push_back({name2("so", t, s), ambient, n * (n - 1) / 2});
  if (t % 2 == 0 && s % 2 == 0 && n > 0) {
    int p = t / 2, q = s / 2, m = p + q;
    out.push_back({name2("u", p, q), ambient, m * m});
    out.push_back({name2("su", p, q), ambient, m * m - 1});
  }
  if (t % 4 == 0 && s % 4 == 0 && n > 0) {
    int p = t / 4, q = s / 4, m = p + q;
    out.push_back({name2("sp", p, q), ambient, m * (2 * m + 1)});
  }
  if (t == s && t > 0)
    out.push_back({"so(" + std::to_string(t) + ",C)", ambient, t * (t - 1)});
  if ((t == 0 && s == 7) || (t == 7 && s == 0))
    out.push_back({"g2", ambient, 14});
  if ((t == 3 && s == 4) || (t == 4 && s == 3))
    out.push_back({"g2(2)", ambient, 14});
  if (t == 7 && s == 7) out.push_back({"g2(C)", ambient, 28});
  if ((t == 0 && s == 8) || (t == 8 && s == 0))
    out.push_back({"spin(7)", ambient, 21});
  if (t == 4 && s == 4) out.push_back({"spin(3,4)", ambient, 21});
  if (t == 8 && s == 8) out.push_back({"spin(7,C)", ambient, 42});
  return out;
}

std::string berger_label(const Signature& ambient, int dim) {
  std::string label;
  for (const BergerEntry& e : berger_candidates(ambient))
    if (e.dim == dim) label += (label.empty() ? "" : ", ") + e.name;
  return label.empty() ? "unrecognized" : label;
}

}  // namespace conelab
