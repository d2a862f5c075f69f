#include "conelab/holonomy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "conelab/linalg.hpp"

namespace conelab {

namespace {

Eigen::MatrixXd metric_matrix(const MetricChart& chart,
                              const Eigen::VectorXd& p) {
  std::vector<Jet> jets = chart.components(p, 0);
  Eigen::MatrixXd g(chart.dim, chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int j = 0; j < chart.dim; ++j) g(i, j) = jets[i * chart.dim + j].value();
  return g;
}

void check_skew(const std::vector<Eigen::MatrixXd>& basis,
                const Eigen::MatrixXd& g) {
  for (const Eigen::MatrixXd& m : basis) {
    double r = (m.transpose() * g + g * m).cwiseAbs().maxCoeff();
    if (r > 1e-8 * (1.0 + m.cwiseAbs().maxCoeff()))
      throw std::runtime_error(
          "endomorphism span: element is not metric-skew (residual " +
          std::to_string(r) + ")");
  }
}

std::vector<Eigen::MatrixXd> curvature_generators(const CurvatureJet& cj,
                                                  int up_to_order) {
  const int n = cj.dim;
  std::vector<Eigen::MatrixXd> gens;
  for (int k = 0; k <= up_to_order; ++k) {
    const NdArray& d = cj.derivs[k];
    std::vector<int> m(k, 0);
    while (true) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Eigen::MatrixXd e(n, n);
          std::vector<int> idx(m);
          idx.resize(k + 4);
          idx[k + 1] = i;
          idx[k + 2] = j;
          for (int l = 0; l < n; ++l)
            for (int c = 0; c < n; ++c) {
              idx[k] = l;
              idx[k + 3] = c;
              e(l, c) = d.at(idx);
            }
          if (e.cwiseAbs().maxCoeff() > 1e-13) gens.push_back(e);
        }
      int pos = k - 1;
      while (pos >= 0 && m[pos] == n - 1) m[pos--] = 0;
      if (pos < 0) break;
      ++m[pos];
    }
  }
  return gens;
}

MatrixAlgebra closure_or_empty(const std::vector<Eigen::MatrixXd>& gens,
                               int ambient, double tol) {
  if (gens.empty()) return MatrixAlgebra::trivial(ambient, tol);
  return lie_closure(gens, tol);
}

}  // namespace

EndoSpan ambrose_singer_span(const MetricChart& chart, const Eigen::VectorXd& p,
                             int max_order, double tol, int jet_order) {
  if (jet_order < 0) jet_order = max_order + 3;
  if (max_order + 3 > jet_order)
    throw std::invalid_argument(
        "curvature span: jet order must cover max_order + 3");
  CurvatureJet cj = curvature_jet(chart, p, max_order);

  EndoSpan span;
  span.point = p;
  span.metric = cj.metric;
  span.generation_order = max_order;
  span.tol = tol;
  span.basis = closure_or_empty(curvature_generators(cj, max_order), chart.dim, tol).basis;
  if (max_order >= 1) {
    MatrixAlgebra prev =
        closure_or_empty(curvature_generators(cj, max_order - 1), chart.dim, tol);
    span.converged = prev.dim() == span.dim();
  }
  check_skew(span.basis, span.metric);
  return span;
}

PathSpec PathSpec::make(std::vector<PathSegment> segments, bool closed) {
  if (segments.empty()) throw std::invalid_argument("path: no segments");
  for (std::size_t s = 0; s + 1 < segments.size(); ++s) {
    double gap =
        (segments[s].curve(1.0) - segments[s + 1].curve(0.0)).cwiseAbs().maxCoeff();
    if (gap > 1e-12)
      throw std::invalid_argument("path: segments do not chain (gap " +
                                  std::to_string(gap) + ")");
  }
  if (closed) {
    double gap = (segments.back().curve(1.0) - segments.front().curve(0.0))
                     .cwiseAbs()
                     .maxCoeff();
    if (gap > 1e-12)
      throw std::invalid_argument("path: loop does not return to its start");
  }
  PathSpec path;
  path.segments = std::move(segments);
  path.closed = closed;
  return path;
}

PathSpec PathSpec::polygon(const std::vector<Eigen::VectorXd>& vertices,
                           bool closed) {
  if (vertices.size() < 2) throw std::invalid_argument("polygon: need two vertices");
  std::vector<PathSegment> segments;
  auto edge = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    PathSegment seg;
    seg.curve = [a, b](double t) { return (a + t * (b - a)).eval(); };
    seg.velocity = [a, b](double) { return (b - a).eval(); };
    segments.push_back(std::move(seg));
  };
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    edge(vertices[i], vertices[i + 1]);
  if (closed) edge(vertices.back(), vertices.front());
  return make(std::move(segments), closed);
}

Eigen::MatrixXd parallel_transport(const MetricChart& chart,
                                   const PathSpec& path, int steps) {
  if (steps < 1) throw std::invalid_argument("transport: steps must be positive");
  const int n = chart.dim;
  auto rhs_matrix = [&](const PathSegment& seg, double t) {
    Eigen::VectorXd pos = seg.curve(t);
    if (!chart.in_domain(pos))
      throw std::runtime_error("transport: path leaves the chart domain");
    Eigen::VectorXd vel = seg.velocity(t);
    NdArray gamma = christoffel_values(chart, pos);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        for (int c = 0; c < n; ++c) a(k, m) -= vel(c) * gamma({k, c, m});
    return a;
  };

  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
  const double h = 1.0 / steps;
  for (const PathSegment& seg : path.segments) {
    Eigen::MatrixXd a_right = rhs_matrix(seg, 0.0);
    for (int s = 0; s < steps; ++s) {
      const double t = s * h;
      Eigen::MatrixXd a1 = a_right;
      Eigen::MatrixXd a2 = rhs_matrix(seg, t + 0.5 * h);
      Eigen::MatrixXd a4 = rhs_matrix(seg, t + h);
      Eigen::MatrixXd k1 = a1 * x;
      Eigen::MatrixXd k2 = a2 * (x + 0.5 * h * k1);
      Eigen::MatrixXd k3 = a2 * (x + 0.5 * h * k2);
      Eigen::MatrixXd k4 = a4 * (x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      a_right = a4;
    }
  }

  Eigen::MatrixXd g_start = metric_matrix(chart, path.segments.front().curve(0.0));
  Eigen::MatrixXd g_end = metric_matrix(chart, path.segments.back().curve(1.0));
  double drift = (x.transpose() * g_end * x - g_start).cwiseAbs().maxCoeff();
  if (drift > 1e-7)
    throw std::runtime_error("transport: metric drift " + std::to_string(drift) +
                             " exceeds 1e-7; increase steps");
  return x;
}

Eigen::MatrixXd matrix_log_near_identity(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd a = p;
  int squarings = 0;
  while ((a - id).norm() > 0.25 && squarings < 40) {
    // Denman-Beavers square root.
    Eigen::MatrixXd y = a, z = id;
    for (int it = 0; it < 60; ++it) {
      Eigen::MatrixXd yn = 0.5 * (y + z.inverse());
      Eigen::MatrixXd zn = 0.5 * (z + y.inverse());
      double step = (yn - y).norm();
      y = yn;
      z = zn;
      if (step < 1e-15) break;
    }
    a = y;
    ++squarings;
  }
  Eigen::MatrixXd e = a - id;
  Eigen::MatrixXd term = e;
  Eigen::MatrixXd log = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= 80; ++k) {
    log += (k % 2 ? 1.0 : -1.0) / k * term;
    if (term.norm() < 1e-18) break;
    term = term * e;
  }
  return std::ldexp(1.0, squarings) * log;
}

namespace {

PathSpec parallelogram(const Eigen::VectorXd& p, int a, int b, double h) {
  Eigen::VectorXd ea = Eigen::VectorXd::Unit(p.size(), a);
  Eigen::VectorXd eb = Eigen::VectorXd::Unit(p.size(), b);
  return PathSpec::polygon({p, p + h * ea, p + h * ea + h * eb, p + h * eb},
                           true);
}

PathSpec lasso(const Eigen::VectorXd& p, const Eigen::VectorXd& q, int a, int b,
               double h) {
  Eigen::VectorXd ea = Eigen::VectorXd::Unit(p.size(), a);
  Eigen::VectorXd eb = Eigen::VectorXd::Unit(p.size(), b);
  return PathSpec::polygon(
      {p, q, q + h * ea, q + h * ea + h * eb, q + h * eb, q}, true);
}

}  // namespace

std::vector<LoopCurvatureCheck> loop_curvature_battery(
    const MetricChart& chart, const Eigen::VectorXd& p,
    const std::vector<double>& sides, int steps) {
  const int n = chart.dim;
  CurvatureJet cj = curvature_jet(chart, p, 0);
  std::vector<LoopCurvatureCheck> checks;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (double h : sides) {
        LoopCurvatureCheck chk;
        chk.axis_a = a;
        chk.axis_b = b;
        chk.side = h;
        chk.expected = Eigen::MatrixXd(n, n);
        for (int l = 0; l < n; ++l)
          for (int c = 0; c < n; ++c)
            chk.expected(l, c) = -cj.derivs[0]({l, a, b, c});
        Eigen::MatrixXd tr = parallel_transport(chart, parallelogram(p, a, b, h),
                                                steps);
        chk.log_over_h2 = matrix_log_near_identity(tr) / (h * h);
        chk.residual = (chk.log_over_h2 - chk.expected).cwiseAbs().maxCoeff();
        checks.push_back(std::move(chk));
      }
  return checks;
}

EndoSpan loop_generated_span(const MetricChart& chart, const Eigen::VectorXd& p,
                             double side, double displacement, int steps,
                             double tol) {
  const int n = chart.dim;
  std::vector<PathSpec> loops;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      loops.push_back(parallelogram(p, a, b, side));
      for (int c = 0; c < n; ++c) {
        Eigen::VectorXd q = p + displacement * Eigen::VectorXd::Unit(n, c);
        loops.push_back(lasso(p, q, a, b, side));
      }
    }

  std::vector<Eigen::MatrixXd> logs(loops.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < loops.size();
         i = next.fetch_add(1))
      logs[i] = matrix_log_near_identity(parallel_transport(chart, loops[i], steps)) /
                (side * side);
  };
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(loops.size()));
  if (workers > 1) {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  } else {
    worker();
  }

  std::vector<Eigen::MatrixXd> gens;
  for (const Eigen::MatrixXd& l : logs)
    if (l.cwiseAbs().maxCoeff() > 1e-11) gens.push_back(l);

  EndoSpan span;
  span.point = p;
  span.metric = metric_matrix(chart, p);
  span.generation_order = 0;
  span.tol = tol;
  span.basis = closure_or_empty(gens, n, tol).basis;
  return span;
}

SpanComparison compare_endo_sets(const std::vector<Eigen::MatrixXd>& a,
                                 const std::vector<Eigen::MatrixXd>& b,
                                 double tol) {
  SpanComparison cmp;
  Eigen::MatrixXd va(0, 0), vb(0, 0);
  if (!a.empty()) va = stack_vectorized(a).transpose();
  if (!b.empty()) vb = stack_vectorized(b).transpose();
  Eigen::MatrixXd qa = va.size() ? col_space(va, tol) : va;
  Eigen::MatrixXd qb = vb.size() ? col_space(vb, tol) : vb;
  cmp.dim_a = static_cast<int>(qa.cols());
  cmp.dim_b = static_cast<int>(qb.cols());
  if (cmp.dim_a == 0 && cmp.dim_b == 0) {
    cmp.distance = 0;
    cmp.a_in_b = cmp.b_in_a = true;
    return cmp;
  }
  cmp.distance = principal_distance(va, vb, tol);
  cmp.a_in_b = cmp.dim_a == 0 ||
               (qb.cols() > 0 &&
                (qa - qb * (qb.transpose() * qa)).cwiseAbs().maxCoeff() < 1e-6);
  cmp.b_in_a = cmp.dim_b == 0 ||
               (qa.cols() > 0 &&
                (qb - qa * (qa.transpose() * qb)).cwiseAbs().maxCoeff() < 1e-6);
  return cmp;
}

SplitEndo split_doubled_endo(const Eigen::MatrixXd& m) {
  const int nn = static_cast<int>(m.rows());
  if (nn < 3) throw std::invalid_argument("split: need at least 3 dimensions");
  const int n = nn - 2;
  SplitEndo out;
  out.so_part = m.block(2, 2, n, n);
  out.translation = -m.block(2, 0, n, 1);
  double r = m.col(1).cwiseAbs().maxCoeff();           // d_v must be killed
  r = std::max(r, m.row(0).cwiseAbs().maxCoeff());     // no d_u output
  r = std::max(r, std::abs(m(1, 0)));                  // d_u -> d_v entry
  out.residual = r;
  return out;
}

StabilizerAnalysis stabilizer_analysis(const EndoSpan& span,
                                       const NullFrame& frame) {
  StabilizerAnalysis out;
  const int nn = frame.ambient_dim();
  const int n = frame.v0_dim();
  for (const Eigen::MatrixXd& m : span.basis)
    out.annihilation_residual =
        std::max(out.annihilation_residual,
                 (m * frame.e_minus).cwiseAbs().maxCoeff() /
                     (1.0 + m.cwiseAbs().maxCoeff()));
  if (out.annihilation_residual > std::max(span.tol, 1e-8)) return out;

  MatrixAlgebra alg;
  alg.ambient_dim = nn;
  alg.basis = span.basis;
  alg.tol = std::max(span.tol, 1e-8);

  try {
    std::vector<Eigen::MatrixXd> linear;
    Eigen::MatrixXd q(n * n, 0);
    for (const Eigen::MatrixXd& m : span.basis) {
      StabElement e = stab_decompose(m, frame, alg.tol);
      Eigen::VectorXd v(n * n);
      int idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(idx++) = e.x(i, j);
      Eigen::VectorXd r = q.cols() ? (v - q * (q.transpose() * v)).eval() : v;
      if (r.norm() > alg.tol * std::max(1.0, v.norm())) {
        linear.push_back(e.x);
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = r.normalized();
      }
    }
    out.linear_part.ambient_dim = n;
    out.linear_part.basis = std::move(linear);
    out.linear_part.tol = alg.tol;
    out.translations = translational_ideal(alg, frame);
  } catch (const std::exception&) {
    return out;  // diagnosed as not a stabiliser span
  }
  out.stabilises = true;

  Eigen::MatrixXd c = frame.basis_matrix();
  Eigen::MatrixXd cinv = c.inverse();
  QuadraticSpace space = QuadraticSpace::from_metric(
      cinv.transpose() * frame.frame_metric() * cinv);
  if (span.dim() > 0) {
    out.decomposable_witness = decomposability_probe(alg, space).invariant_subspace;
    out.null_line = invariant_null_line_search(alg, space);
  }
  return out;
}

std::vector<Eigen::MatrixXd> doubled_plane_wave_reference_span() {
  // Matrices given in the adapted frame (d_v, d_x, d_y, d_z - f d_x, d_u);
  // at y = 0 the profile f and its first derivatives vanish, so the frame
  // is a permutation of the coordinate one and conjugation is exact.
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(5, 5);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(5, 5);
  m1(0, 2) = 1;
  m1(1, 2) = 1;
  m1(2, 3) = -1;
  m1(2, 4) = -1;
  m2(0, 3) = 1;
  m2(1, 4) = -1;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(5, 5);
  e(1, 0) = 1;  // d_v
  e(2, 1) = 1;  // d_x
  e(3, 2) = 1;  // d_y
  e(4, 3) = 1;  // d_z - f d_x with f = 0
  e(0, 4) = 1;  // d_u
  Eigen::MatrixXd einv = e.inverse();
  return {e * m1 * einv, e * m2 * einv};
}

}  // namespace conelab
