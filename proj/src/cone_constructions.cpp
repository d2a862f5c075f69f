#include "conelab/cone_constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "conelab/linalg.hpp"

namespace conelab {

namespace {

std::string format_point(const Eigen::VectorXd& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
  os << ")";
  return os.str();
}

std::vector<Jet> base_jets_embedded(
    const std::function<std::vector<Jet>(const Eigen::VectorXd&, int)>& f,
    const Eigen::VectorXd& pbase, int order, int new_nvars, int offset) {
  std::vector<Jet> g = f(pbase, order);
  for (Jet& j : g) j = j.embedded(new_nvars, offset);
  return g;
}

}  // namespace

MetricChart cone(const MetricChart& base) {
  MetricChart ch;
  const int n = base.dim;
  ch.dim = n + 1;
  ch.signature = {base.signature.t + 1, base.signature.s};
  ch.coord_names.push_back("r");
  ch.coord_names.insert(ch.coord_names.end(), base.coord_names.begin(),
                        base.coord_names.end());
  ch.domain.push_back({0.1, 2.0});
  ch.domain.insert(ch.domain.end(), base.domain.begin(), base.domain.end());
  ch.label = "cone(" + base.label + ")";
  auto basef = base.components;
  ch.components = [basef, n](const Eigen::VectorXd& p, int order) {
    const int N = n + 1;
    std::vector<Jet> out(static_cast<std::size_t>(N) * N,
                         Jet::constant(0.0, N, order));
    out[0] = Jet::constant(-1.0, N, order);
    Jet r = Jet::variable(p(0), 0, N, order);
    Jet r2 = r * r;
    std::vector<Jet> g = base_jets_embedded(basef, p.tail(n), order, N, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i + 1) * N + (j + 1)] = r2 * g[i * n + j];
    return out;
  };
  return ch;
}

MetricChart double_warped(const MetricChart& base) {
  MetricChart ch;
  const int n = base.dim;
  ch.dim = n + 2;
  ch.signature = {base.signature.t + 1, base.signature.s + 1};
  ch.coord_names = {"u", "v"};
  ch.coord_names.insert(ch.coord_names.end(), base.coord_names.begin(),
                        base.coord_names.end());
  ch.domain = {{0.1, 2.0}, {-1.0, 1.0}};
  ch.domain.insert(ch.domain.end(), base.domain.begin(), base.domain.end());
  ch.label = "doubled(" + base.label + ")";
  auto basef = base.components;
  ch.components = [basef, n](const Eigen::VectorXd& p, int order) {
    const int N = n + 2;
    std::vector<Jet> out(static_cast<std::size_t>(N) * N,
                         Jet::constant(0.0, N, order));
    out[0 * N + 1] = Jet::constant(1.0, N, order);
    out[1 * N + 0] = Jet::constant(1.0, N, order);
    Jet u = Jet::variable(p(0), 0, N, order);
    Jet u2 = u * u;
    std::vector<Jet> g = base_jets_embedded(basef, p.tail(n), order, N, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i + 2) * N + (j + 2)] = u2 * g[i * n + j];
    return out;
  };
  return ch;
}

MetricChart exponential_extension(const MetricChart& base) {
  MetricChart ch;
  const int n = base.dim;
  ch.dim = n + 1;
  ch.signature = {base.signature.t, base.signature.s + 1};
  ch.coord_names.push_back("s");
  ch.coord_names.insert(ch.coord_names.end(), base.coord_names.begin(),
                        base.coord_names.end());
  ch.domain.push_back({-1.0, 1.0});
  ch.domain.insert(ch.domain.end(), base.domain.begin(), base.domain.end());
  ch.label = "exp(" + base.label + ")";
  auto basef = base.components;
  ch.components = [basef, n](const Eigen::VectorXd& p, int order) {
    const int N = n + 1;
    std::vector<Jet> out(static_cast<std::size_t>(N) * N,
                         Jet::constant(0.0, N, order));
    out[0] = Jet::constant(1.0, N, order);
    Jet e2s = exp(2.0 * Jet::variable(p(0), 0, N, order));
    std::vector<Jet> g = base_jets_embedded(basef, p.tail(n), order, N, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i + 1) * N + (j + 1)] = e2s * g[i * n + j];
    return out;
  };
  return ch;
}

MetricChart chart_by_id(const std::string& id) {
  if (id.rfind("cone:", 0) == 0) return cone(chart_by_id(id.substr(5)));
  if (id.rfind("doubled:", 0) == 0)
    return double_warped(chart_by_id(id.substr(8)));
  if (id.rfind("exp:", 0) == 0)
    return exponential_extension(chart_by_id(id.substr(4)));
  return base_chart_by_id(id);
}

double ConeIdentityResiduals::max() const {
  return std::max({connection, curvature, ricci});
}

ConeIdentityResiduals cone_identity_residuals(const MetricChart& base,
                                              const Eigen::VectorXd& p) {
  const int n = base.dim;
  const int N = n + 1;
  CurvatureJet cb = curvature_jet(base, p, 0);
  MetricChart co = cone(base);
  Eigen::VectorXd pc(N);
  pc(0) = 1.0;
  pc.tail(n) = p;
  CurvatureJet cc = curvature_jet(co, pc, 0);

  ConeIdentityResiduals out;

  NdArray gamma_expect(N, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      gamma_expect({0, i + 1, j + 1}) = cb.metric(i, j);
    gamma_expect({i + 1, 0, i + 1}) = 1.0;
    gamma_expect({i + 1, i + 1, 0}) = 1.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        gamma_expect({k + 1, i + 1, j + 1}) = cb.christoffel({k, i, j});
  }
  double conn = 0;
  for (std::size_t f = 0; f < gamma_expect.a.size(); ++f)
    conn = std::max(conn, std::abs(cc.christoffel.a[f] - gamma_expect.a[f]));

  VectorField euler;
  euler.dim = N;
  euler.components = [N](const Eigen::VectorXd& q, int order) {
    std::vector<Jet> comps(N, Jet::constant(0.0, N, order));
    comps[0] = Jet::variable(q(0), 0, N, order);
    return comps;
  };
  out.connection = std::max(conn, homothety_residual(co, euler, pc, 1.0));

  NdArray r_expect(N, 4);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c)
          r_expect({l + 1, i + 1, j + 1, c + 1}) =
              cb.derivs[0]({l, i, j, c}) + (l == i ? cb.metric(j, c) : 0.0) -
              (l == j ? cb.metric(i, c) : 0.0);
  double curv = 0;
  for (std::size_t f = 0; f < r_expect.a.size(); ++f)
    curv = std::max(curv, std::abs(cc.derivs[0].a[f] - r_expect.a[f]));
  out.curvature = curv;

  Eigen::MatrixXd ric_expect = Eigen::MatrixXd::Zero(N, N);
  ric_expect.bottomRightCorner(n, n) = ricci(cb) + (n - 1.0) * cb.metric;
  out.ricci = (ricci(cc) - ric_expect).cwiseAbs().maxCoeff();
  return out;
}

double doubling_isometry_residual(const MetricChart& base,
                                  const Eigen::VectorXd& p, double stretch) {
  const int n = base.dim;
  const int N = n + 2;
  MetricChart source = cone(exponential_extension(base));
  MetricChart target = double_warped(base);

  std::vector<Jet> map(N);
  Jet r = Jet::variable(p(0), 0, N, 1);
  Jet s = Jet::variable(p(1), 1, N, 1);
  map[0] = stretch * (r * exp(s));
  map[1] = -0.5 * (r * exp(-s));
  for (int i = 0; i < n; ++i) map[2 + i] = Jet::variable(p(2 + i), 2 + i, N, 1);

  Eigen::VectorXd q(N);
  Eigen::MatrixXd jac(N, N);
  std::vector<int> alpha(N, 0);
  for (int c = 0; c < N; ++c) {
    q(c) = map[c].value();
    for (int a = 0; a < N; ++a) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[a] = 1;
      jac(c, a) = map[c].derivative(alpha);
    }
  }

  std::vector<Jet> gs = source.components(p, 0);
  std::vector<Jet> gt = target.components(q, 0);
  Eigen::MatrixXd Gs(N, N), Gt(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Gs(i, j) = gs[i * N + j].value();
      Gt(i, j) = gt[i * N + j].value();
    }
  return (jac.transpose() * Gt * jac - Gs).cwiseAbs().maxCoeff();
}

double doubled_derivative_residuals(const MetricChart& base,
                                    const Eigen::VectorXd& p, int pmax,
                                    int qmax, int jet_order) {
  if (pmax < 0 || qmax < 0 || pmax + qmax + 3 > jet_order)
    throw std::invalid_argument(
        "doubled derivatives: jet order must be at least pmax + qmax + 3");
  const int n = base.dim;
  const int N = n + 2;
  MetricChart doubled = double_warped(base);
  CurvatureJet cd = curvature_jet(doubled, p, pmax + qmax);
  Eigen::VectorXd pb = p.tail(n);
  CurvatureJet cb = curvature_jet(base, pb, std::max(pmax, 1));
  const double u = p(0);

  double res = 0;
  std::vector<int> idx(pmax + qmax + 4);
  std::vector<int> bidx;
  for (int q = 0; q <= qmax; ++q) {
    for (int pp = 0; pp <= pmax; ++pp) {
      double c = 1.0;
      for (int j = 2; j <= q + 1; ++j) c *= -(pp + j);
      const double scale = c / std::pow(u, q);
      const NdArray& D = cd.derivs[q + pp];

      // Enumerate base directions m_1..m_pp for the inner derivative slots.
      std::vector<int> m(pp, 0);
      while (true) {
        for (int l = 0; l < N; ++l)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
              for (int cidx = 0; cidx < N; ++cidx) {
                // The closed form covers v- and base-direction insertions;
                // u-direction insertions only stay zero while pp == 0.
                if ((i == 0 || j == 0 || cidx == 0) && pp >= 1) continue;
                idx.resize(q + pp + 4);
                for (int a = 0; a < q; ++a) idx[a] = 0;
                for (int a = 0; a < pp; ++a) idx[q + a] = m[a] + 2;
                idx[q + pp] = l;
                idx[q + pp + 1] = i;
                idx[q + pp + 2] = j;
                idx[q + pp + 3] = cidx;
                double got = D.at(idx);
                double expect = 0.0;
                if (l >= 2 && i >= 2 && j >= 2 && cidx >= 2) {
                  bidx.assign(m.begin(), m.end());
                  bidx.insert(bidx.end(),
                              {l - 2, i - 2, j - 2, cidx - 2});
                  expect = scale * cb.derivs[pp].at(bidx);
                } else if (l == 1 && i >= 2 && j >= 2 && cidx >= 2) {
                  double sum = 0;
                  for (int a = 0; a < pp; ++a) {
                    bidx.clear();
                    for (int b = 0; b < pp; ++b)
                      if (b != a) bidx.push_back(m[b]);
                    bidx.insert(bidx.end(), {0, i - 2, j - 2, cidx - 2});
                    // bidx[pp - 1] is the upper slot; lower it with the
                    // base metric against the omitted direction.
                    for (int e = 0; e < n; ++e) {
                      bidx[pp - 1] = e;
                      sum += cb.metric(e, m[a]) * cb.derivs[pp - 1].at(bidx);
                    }
                  }
                  expect = scale * (-u) * sum;
                }
                res = std::max(res, std::abs(got - expect));
              }
        // next multi-index
        int pos = pp - 1;
        while (pos >= 0 && ++m[pos] == n) m[pos--] = 0;
        if (pos < 0) break;
      }
    }
  }

  // One u-derivative commutes past one base derivative.
  if (pmax >= 1 && qmax >= 1) {
    const NdArray& D2 = cd.derivs[2];
    for (int mdir = 2; mdir < N; ++mdir)
      for (int l = 0; l < N; ++l)
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j)
            for (int c = 0; c < N; ++c)
              res = std::max(res, std::abs(D2({0, mdir, l, i, j, c}) -
                                           D2({mdir, 0, l, i, j, c})));
  }
  return res;
}

namespace {

/// Covariant derivative values (d_a W^k + Gamma^k_am W^m) of a field at p.
Eigen::MatrixXd field_derivative_matrix(const MetricChart& chart,
                                        const VectorField& w,
                                        const Eigen::VectorXd& p,
                                        Eigen::VectorXd* values) {
  const int N = chart.dim;
  NdArray gamma = christoffel_values(chart, p);
  std::vector<Jet> comps = w.components(p, 1);
  Eigen::VectorXd wv(N);
  for (int k = 0; k < N; ++k) wv(k) = comps[k].value();
  Eigen::MatrixXd D(N, N);  // D(k, a) = (nabla_a w)^k
  std::vector<int> alpha(N, 0);
  for (int k = 0; k < N; ++k)
    for (int a = 0; a < N; ++a) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[a] = 1;
      double d = comps[k].derivative(alpha);
      for (int m = 0; m < N; ++m) d += gamma({k, a, m}) * wv(m);
      D(k, a) = d;
    }
  if (values) *values = wv;
  return D;
}

Eigen::MatrixXd metric_values(const MetricChart& chart,
                              const Eigen::VectorXd& p) {
  std::vector<Jet> g = chart.components(p, 0);
  Eigen::MatrixXd G(chart.dim, chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int j = 0; j < chart.dim; ++j) G(i, j) = g[i * chart.dim + j].value();
  return G;
}

Eigen::VectorXd potential_gradient(const Expression& potential,
                                   const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = Jet::variable(p(i), i, n, 1);
  Jet f = potential.eval(coords);
  Eigen::VectorXd grad(n);
  std::vector<int> alpha(n, 0);
  for (int i = 0; i < n; ++i) {
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[i] = 1;
    grad(i) = f.derivative(alpha);
  }
  return grad;
}

VectorField doubled_lift_field(const MetricChart& base, const VectorField& xi,
                               const Expression* potential, double a,
                               bool constant_v_part) {
  const int n = base.dim;
  const int N = n + 2;
  auto xif = xi.components;
  Expression pot;
  if (potential) pot = *potential;
  bool has_pot = potential != nullptr;
  VectorField total;
  total.dim = N;
  total.components = [xif, pot, has_pot, a, constant_v_part, n,
                      N](const Eigen::VectorXd& q, int order) {
    std::vector<Jet> comps(N, Jet::constant(0.0, N, order));
    Jet u = Jet::variable(q(0), 0, N, order);
    comps[0] = Jet::constant(-a, N, order);
    if (has_pot) {
      std::vector<Jet> coords(n);
      for (int i = 0; i < n; ++i)
        coords[i] = Jet::variable(q(2 + i), 2 + i, N, order);
      comps[1] = pot.eval(coords);
    } else if (constant_v_part) {
      comps[1] = Jet::constant(1.0, N, order);
    }
    std::vector<Jet> xic = xif(q.tail(n), order);
    Jet inv_u = inverse(u);
    for (int i = 0; i < n; ++i)
      comps[2 + i] = xic[i].embedded(N, 2) * inv_u;
    return comps;
  };
  return total;
}

}  // namespace

LiftedField lift_parallel_vector(const MetricChart& base,
                                 const VectorField& xi,
                                 const Expression& potential, double a) {
  for (const Eigen::VectorXd& p : sample_grid(base, 32, 0)) {
    double h = homothety_residual(base, xi, p, a);
    if (h >= 1e-8) {
      throw std::invalid_argument(
          "lift: field is not homothetic with the declared factor (residual " +
          std::to_string(h) + " at " + format_point(p) + ")");
    }
    std::vector<Jet> comps = xi.components(p, 0);
    Eigen::VectorXd xv(base.dim);
    for (int i = 0; i < base.dim; ++i) xv(i) = comps[i].value();
    Eigen::VectorXd flat = metric_values(base, p) * xv;
    double gres = (potential_gradient(potential, p) - flat).cwiseAbs().maxCoeff();
    if (gres >= 1e-8) {
      throw std::invalid_argument(
          "lift: potential gradient does not match the field's metric dual "
          "(residual " +
          std::to_string(gres) + " at " + format_point(p) + ")");
    }
  }
  LiftedField out;
  out.kind = LiftedField::Kind::parallel_vector;
  out.base_field = xi;
  out.total_field = doubled_lift_field(base, xi, &potential, a, false);
  return out;
}

LiftedField lift_recurrent_vector(const MetricChart& base,
                                  const VectorField& chi,
                                  const Expression& potential) {
  for (const Eigen::VectorXd& p : sample_grid(base, 32, 0)) {
    RecurrenceAnalysis ra = recurrence_analysis(base, chi, p);
    if (ra.residual >= 1e-8) {
      throw std::invalid_argument("lift: field is not recurrent (residual " +
                                  std::to_string(ra.residual) + " at " +
                                  format_point(p) + ")");
    }
    std::vector<Jet> comps = chi.components(p, 0);
    Eigen::VectorXd xv(base.dim);
    for (int i = 0; i < base.dim; ++i) xv(i) = comps[i].value();
    Eigen::VectorXd flat = metric_values(base, p) * xv;
    if (std::abs(flat.dot(xv)) >= 1e-8) {
      throw std::invalid_argument("lift: field is not null at " +
                                  format_point(p));
    }
    double gres = (potential_gradient(potential, p) - flat).cwiseAbs().maxCoeff();
    if (gres >= 1e-8) {
      throw std::invalid_argument(
          "lift: potential gradient does not match the field's metric dual "
          "(residual " +
          std::to_string(gres) + " at " + format_point(p) + ")");
    }
  }
  LiftedField out;
  out.kind = LiftedField::Kind::null_plane;
  out.base_field = chi;
  out.total_field = doubled_lift_field(base, chi, &potential, 0.0, false);
  return out;
}

LiftedField lift_distribution_field(const MetricChart& base,
                                    const VectorField& w) {
  LiftedField out;
  out.kind = LiftedField::Kind::distribution;
  out.base_field = w;
  out.total_field = doubled_lift_field(base, w, nullptr, 0.0, true);
  return out;
}

double parallel_plane_residual(const MetricChart& chart, const VectorField& a,
                               const VectorField& b,
                               const Eigen::VectorXd& p) {
  const int N = chart.dim;
  Eigen::VectorXd av, bv;
  Eigen::MatrixXd Da = field_derivative_matrix(chart, a, p, &av);
  Eigen::MatrixXd Db = field_derivative_matrix(chart, b, p, &bv);
  Eigen::MatrixXd span(N, 2);
  span.col(0) = av;
  span.col(1) = bv;
  if (svd_rank(span, 1e-8) < 2)
    throw std::runtime_error(
        "parallel plane: spanning fields are linearly dependent at " +
        format_point(p));
  Eigen::MatrixXd Q = col_space(span, 1e-8);
  double res = 0;
  for (const Eigen::MatrixXd& D : {Da, Db}) {
    Eigen::MatrixXd off = D - Q * (Q.transpose() * D);
    res = std::max(res, off.cwiseAbs().maxCoeff());
  }
  return res;
}

RecurrenceAnalysis recurrence_analysis(const MetricChart& chart,
                                       const VectorField& chi,
                                       const Eigen::VectorXd& p) {
  const int N = chart.dim;
  Eigen::VectorXd xv;
  Eigen::MatrixXd D = field_derivative_matrix(chart, chi, p, &xv);
  double nn = xv.squaredNorm();
  RecurrenceAnalysis out;
  out.alpha = D.transpose() * xv / nn;
  out.residual = (D - xv * out.alpha.transpose()).cwiseAbs().maxCoeff();
  Eigen::VectorXd flat = metric_values(chart, p) * xv;
  double ff = flat.squaredNorm();
  double lambda = ff > 0 ? out.alpha.dot(flat) / ff : 0.0;
  out.dual_proportionality = (out.alpha - lambda * flat).cwiseAbs().maxCoeff();
  (void)N;
  return out;
}

double recurrence_obstruction_residual(const MetricChart& base,
                                       const VectorField& chi,
                                       const Expression& potential,
                                       int poly_degree, int grid_count,
                                       std::uint64_t seed) {
  const int n = base.dim;
  const JetTable& table = JetTable::get(n, poly_degree);
  const int nmono = static_cast<int>(table.size());
  std::vector<Eigen::VectorXd> grid = sample_grid(base, grid_count, seed);
  const int rows = static_cast<int>(grid.size()) * n;
  Eigen::MatrixXd A(rows, nmono);
  Eigen::VectorXd b(rows);
  std::vector<double> coords(n);
  int row = 0;
  for (const Eigen::VectorXd& p : grid) {
    RecurrenceAnalysis ra = recurrence_analysis(base, chi, p);
    for (int i = 0; i < n; ++i) coords[i] = p(i);
    double f = potential.eval(coords);
    for (int a = 0; a < n; ++a, ++row) {
      for (int m = 0; m < nmono; ++m) {
        const std::vector<int>& e = table.monomials[m];
        double mono = 1.0, dmono = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < e[i]; ++k) mono *= p(i);
        if (e[a] > 0) {
          dmono = e[a];
          for (int i = 0; i < n; ++i) {
            int deg = e[i] - (i == a ? 1 : 0);
            for (int k = 0; k < deg; ++k) dmono *= p(i);
          }
        }
        A(row, m) = dmono - ra.alpha(a) * mono;
      }
      b(row) = f * ra.alpha(a);
    }
  }
  Eigen::VectorXd h = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return (A * h - b).norm() / std::sqrt(static_cast<double>(rows));
}

}  // namespace conelab
