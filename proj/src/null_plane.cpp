#include "conelab/null_plane.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "conelab/cone_constructions.hpp"
#include "conelab/linalg.hpp"

namespace conelab {
namespace {

std::vector<Jet> coord_jets(const Eigen::VectorXd& p, int order) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i)
    v.push_back(Jet::variable(p(i), i, n, order));
  return v;
}

double d1(const Jet& f, int k, int n) {
  std::vector<int> a(n, 0);
  a[k] = 1;
  return f.derivative(a);
}

std::vector<std::pair<double, double>> default_domain(int m) {
  std::vector<std::pair<double, double>> box(m + 3, {-1.0, 1.0});
  box[m + 2] = {0.1, 2.0};
  return box;
}

std::vector<std::pair<double, double>> domain_box(const NullPlaneData& d) {
  return d.domain.empty() ? default_domain(d.m0_dim) : d.domain;
}

std::vector<Jet> normal_form_metric_jets(const NullPlaneData& d,
                                         const EtaField& eta,
                                         const Eigen::VectorXd& p, int order) {
  const int m = d.m0_dim, n = m + 3, ti = m, si = m + 1, ui = m + 2;
  auto v = coord_jets(p, order);
  std::vector<Jet> g(n * n, Jet::constant(0.0, n, order));
  if (m > 0) {
    std::vector<Jet> xu(v.begin(), v.begin() + m);
    xu.push_back(v[ui]);
    Jet w = exp(v[si] * -2.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet gij = i == j ? d.g0[i * m + i](xu)
                         : (d.g0[i * m + j](xu) + d.g0[j * m + i](xu)) * 0.5;
        gij = w * gij;
        g[i * n + j] = gij;
        g[j * n + i] = gij;
      }
  }
  g[si * n + si] = Jet::constant(1.0, n, order);
  Jet et = eta.eta_t(v), es = eta.eta_s(v);
  g[ui * n + ti] = et;
  g[ti * n + ui] = et;
  g[ui * n + si] = es;
  g[si * n + ui] = es;
  for (int i = 0; i < m; ++i) {
    Jet hi = eta.eta_x[i](v);
    g[ui * n + i] = hi;
    g[i * n + ui] = hi;
  }
  g[ui * n + ui] = eta.eta_u(v) * 2.0;
  return g;
}

Eigen::MatrixXd metric_values(const NullPlaneData& d, const EtaField& eta,
                              const Eigen::VectorXd& p) {
  const int n = d.m0_dim + 3;
  auto g = normal_form_metric_jets(d, eta, p, 0);
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g[i * n + j].value();
  return G;
}

Eigen::MatrixXd metric_values(const MetricChart& chart,
                              const Eigen::VectorXd& p) {
  auto g = chart.components(p, 0);
  const int n = chart.dim;
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g[i * n + j].value();
  return G;
}

void validate_data(const NullPlaneData& d) {
  const int m = d.m0_dim;
  if (m < 0) throw std::invalid_argument("null plane data: m0_dim < 0");
  if (!d.f1 || !d.f2)
    throw std::invalid_argument("null plane data: f1 and f2 are required");
  if (static_cast<int>(d.c.size()) != m)
    throw std::invalid_argument("null plane data: need one c slot per x coordinate");
  if (static_cast<int>(d.g0.size()) != m * m)
    throw std::invalid_argument("null plane data: g0 must have m0_dim^2 slots");
  if (!d.domain.empty() && static_cast<int>(d.domain.size()) != m + 3)
    throw std::invalid_argument("null plane data: domain must cover (x, t, s, u)");
}

}  // namespace

EtaField solve_eta(const NullPlaneData& data) {
  validate_data(data);
  const int m = data.m0_dim, n = m + 3, ti = m, si = m + 1, ui = m + 2;
  auto ubox = domain_box(data)[ui];
  double prev = 0;
  for (int k = 0; k <= 128; ++k) {
    double u0 = ubox.first + (ubox.second - ubox.first) * k / 128.0;
    Jet uj = Jet::constant(u0, 1, 0);
    double val = data.f1(std::span<const Jet>(&uj, 1)).value();
    // A sign change between samples pins a zero even when no sample
    // lands on it.
    if (std::abs(val) < 1e-6 || (k > 0 && val * prev < 0)) {
      std::ostringstream os;
      os << "null plane data: f1 must be nowhere vanishing on the u-interval, "
         << "f1(" << u0 << ") = " << val;
      throw std::invalid_argument(os.str());
    }
    prev = val;
  }

  EtaField eta;
  eta.m0_dim = m;
  JetFunction f1 = data.f1, f2 = data.f2;
  eta.eta_t = [f1, ui](std::span<const Jet> v) {
    return f1(std::span<const Jet>(&v[ui], 1));
  };
  eta.eta_s = [f1, f2, m, ti, si, ui](std::span<const Jet> v) {
    std::vector<Jet> xsu(v.begin(), v.begin() + m);
    xsu.push_back(v[si]);
    xsu.push_back(v[ui]);
    return v[ti] * f1(std::span<const Jet>(&v[ui], 1)) * 2.0 + f2(xsu);
  };
  for (int i = 0; i < m; ++i) {
    JetFunction ci = data.c[i];
    eta.eta_x.push_back([f2, ci, i, m, si, ui, n](std::span<const Jet> v) {
      const int K = v[0].order();
      // One extra order so the x_i-derivative of f2 lands back at K.
      std::vector<Jet> w;
      w.reserve(n);
      for (int j = 0; j < n; ++j)
        w.push_back(Jet::variable(v[j].value(), j, n, K + 1));
      std::vector<Jet> xu(w.begin(), w.begin() + m);
      xu.push_back(w[ui]);
      Jet acc = ci(xu).truncated(K);
      // int_0^s e^{2r} d_i f2(x, r, u) dr via r = s tau, tau in [0, 1].
      double s0 = v[si].value();
      int nodes = std::max(8, static_cast<int>(std::ceil(32.0 * std::abs(s0))));
      std::vector<double> gx, gw;
      gauss_legendre(nodes, gx, gw);
      Jet integral = Jet::constant(0.0, n, K);
      std::vector<Jet> args(w.begin(), w.begin() + m);
      args.push_back(Jet());
      args.push_back(w[ui]);
      for (int k = 0; k < nodes; ++k) {
        double tau = 0.5 * (gx[k] + 1.0);
        args[m] = w[si] * tau;
        Jet di = f2(args).partial(i);
        integral += (exp(args[m] * 2.0).truncated(K) * di) * (0.5 * gw[k]);
      }
      Jet s_low = v[si].order() == K ? v[si] : v[si].truncated(K);
      return exp(s_low * -2.0) * (acc + s_low * integral);
    });
  }
  if (data.eta_u) {
    eta.eta_u = data.eta_u;
  } else {
    eta.eta_u = [](std::span<const Jet> v) {
      return Jet::constant(0.0, v[0].nvars(), v[0].order());
    };
  }
  return eta;
}

double eta_system_residual(const NullPlaneData& data, const EtaField& eta,
                           int grid_count) {
  const int m = data.m0_dim, n = m + 3, ti = m, si = m + 1;
  auto box = domain_box(data);
  double worst = 0;
  for (int g = 0; g < grid_count; ++g) {
    Eigen::VectorXd h = halton_point(1 + g, n);
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i)
      p(i) = box[i].first + (box[i].second - box[i].first) * h(i);
    auto v = coord_jets(p, 1);
    Jet et = eta.eta_t(v), es = eta.eta_s(v);
    double r = std::abs(d1(et, ti, n));
    r = std::max(r, std::abs(d1(et, si, n)));
    for (int i = 0; i < m; ++i) r = std::max(r, std::abs(d1(et, i, n)));
    r = std::max(r, std::abs(d1(es, ti, n) - 2.0 * et.value()));
    for (int i = 0; i < m; ++i) {
      Jet hi = eta.eta_x[i](v);
      r = std::max(r, std::abs(d1(hi, ti, n)));
      r = std::max(r,
                   std::abs(d1(hi, si, n) - d1(es, i, n) + 2.0 * hi.value()));
    }
    worst = std::max(worst, r);
  }
  return worst;
}

MetricChart build_metric(const NullPlaneData& data, const EtaField& eta) {
  validate_data(data);
  const int m = data.m0_dim, n = m + 3;
  MetricChart ch;
  ch.dim = n;
  for (int i = 0; i < m; ++i)
    ch.coord_names.push_back("x" + std::to_string(i + 1));
  ch.coord_names.push_back("t");
  ch.coord_names.push_back("s");
  ch.coord_names.push_back("u");
  ch.domain = domain_box(data);
  ch.label = data.label;
  NullPlaneData d = data;
  EtaField e = eta;
  ch.components = [d, e](const Eigen::VectorXd& p, int order) {
    return normal_form_metric_jets(d, e, p, order);
  };
  for (const Eigen::VectorXd& p : sample_grid(ch, 32, 0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric_values(ch, p));
    double lo = es.eigenvalues().cwiseAbs().minCoeff();
    double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < 1e-8 * std::max(1.0, hi)) {
      std::ostringstream os;
      os << "null plane metric: degenerate at grid point (";
      for (int i = 0; i < n; ++i) os << (i ? ", " : "") << p(i);
      os << ")";
      throw std::invalid_argument(os.str());
    }
  }
  Eigen::VectorXd center(n);
  for (int i = 0; i < n; ++i)
    center(i) = 0.5 * (ch.domain[i].first + ch.domain[i].second);
  ch.signature = signature_at(ch, center);
  return ch;
}

NormalFormFrame normal_form_frame(const NullPlaneData& data,
                                  const EtaField& eta) {
  const int m = data.m0_dim, n = m + 3, ti = m, si = m + 1, ui = m + 2;
  NormalFormFrame fr;
  fr.V = VectorField::coordinate(n, ti);
  fr.Z = VectorField::coordinate(n, si);
  NullPlaneData d = data;
  EtaField e = eta;
  fr.alpha = [d, e, n, ti, si](const Eigen::VectorXd& p) {
    auto v = coord_jets(p, 1);
    Jet eu = e.eta_u(v), es = e.eta_s(v), et = e.eta_t(v);
    double et0 = et.value();
    double fa = d1(eu, ti, n) / (et0 * et0) - 2.0 * es.value() / et0;
    Eigen::MatrixXd G = metric_values(d, e, p);
    return Eigen::VectorXd(G.row(si).transpose() + fa * G.row(ti).transpose());
  };
  fr.beta = [d, e, m, n, ti, si, ui](const Eigen::VectorXd& p) {
    auto v = coord_jets(p, 1);
    Jet es = e.eta_s(v), et = e.eta_t(v), eu = e.eta_u(v);
    double et0 = et.value(), es0 = es.value();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(ti) = 2.0;
    b(si) = d1(es, si, n) / et0;
    for (int i = 0; i < m; ++i) {
      Jet hi = e.eta_x[i](v);
      b(i) = (d1(es, i, n) + d1(hi, si, n) + 2.0 * hi.value()) / (2.0 * et0);
    }
    b(ui) = (d1(eu, si, n) - es0 * es0 + 2.0 * eu.value()) / et0;
    return b;
  };
  return fr;
}

AlphaBeta alpha_beta(const NullPlaneData& data, const EtaField& eta,
                     const Eigen::VectorXd& p) {
  NormalFormFrame fr = normal_form_frame(data, eta);
  AlphaBeta out;
  out.alpha = fr.alpha(p);
  out.beta = fr.beta(p);
  MetricChart ch = build_metric(data, eta);
  NdArray gam = christoffel_values(ch, p);
  Eigen::MatrixXd G = metric_values(data, eta, p);
  const int n = ch.dim, ti = data.m0_dim, si = ti + 1;
  double r = 0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double nv = gam({l, k, ti}) - out.alpha(k) * (l == ti ? 1.0 : 0.0) -
                  G(k, ti) * (l == si ? 1.0 : 0.0);
      double nz = gam({l, k, si}) + (l == k ? 1.0 : 0.0) -
                  out.beta(k) * (l == ti ? 1.0 : 0.0) -
                  G(k, si) * (l == si ? 1.0 : 0.0);
      r = std::max(r, std::max(std::abs(nv), std::abs(nz)));
    }
  out.residual = r;
  return out;
}

double FundamentalResiduals::max() const {
  double r = frame;
  for (double x : {d_vflat, d_zflat, bracket, lie_v, lie_z, duality})
    r = std::max(r, x);
  return r;
}

FundamentalResiduals fundamental_residuals(const MetricChart& chart,
                                           const VectorField& V,
                                           const VectorField& Z,
                                           const CovectorField& alpha,
                                           const CovectorField& beta,
                                           const Eigen::VectorXd& p) {
  const int n = chart.dim;
  auto gj = chart.components(p, 1);
  auto vj = V.components(p, 1);
  auto zj = Z.components(p, 1);
  Eigen::MatrixXd G(n, n), dV(n, n), dZ(n, n);
  Eigen::VectorXd vv(n), zv(n);
  for (int l = 0; l < n; ++l) {
    vv(l) = vj[l].value();
    zv(l) = zj[l].value();
    for (int k = 0; k < n; ++k) {
      dV(k, l) = d1(vj[l], k, n);
      dZ(k, l) = d1(zj[l], k, n);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = gj[i * n + j].value();

  FundamentalResiduals out;
  out.frame = std::max({std::abs(vv.dot(G * vv)), std::abs(zv.dot(G * zv) - 1.0),
                        std::abs(vv.dot(G * zv))});
  if (out.frame > 1e-9)
    throw std::invalid_argument(
        "frame pair fails its null/unit/orthogonality normalization at the "
        "requested point");

  Eigen::VectorXd ap = alpha(p), bp = beta(p);
  std::vector<Jet> vflat(n), zflat(n);
  for (int j = 0; j < n; ++j) {
    Jet a = gj[j * n + 0] * vj[0], b = gj[j * n + 0] * zj[0];
    for (int mm = 1; mm < n; ++mm) {
      a += gj[j * n + mm] * vj[mm];
      b += gj[j * n + mm] * zj[mm];
    }
    vflat[j] = a;
    zflat[j] = b;
  }
  Eigen::VectorXd vf(n), zf(n);
  Eigen::MatrixXd dvf(n, n), dzf(n, n);
  for (int j = 0; j < n; ++j) {
    vf(j) = vflat[j].value();
    zf(j) = zflat[j].value();
    for (int k = 0; k < n; ++k) {
      dvf(k, j) = d1(vflat[j], k, n);
      dzf(k, j) = d1(zflat[j], k, n);
    }
  }

  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      double lv = (dvf(k, l) - dvf(l, k)) -
                  ((ap(k) - zf(k)) * vf(l) - (ap(l) - zf(l)) * vf(k));
      double lz = (dzf(k, l) - dzf(l, k)) - (bp(k) * vf(l) - bp(l) * vf(k));
      out.d_vflat = std::max(out.d_vflat, std::abs(lv));
      out.d_zflat = std::max(out.d_zflat, std::abs(lz));
    }

  Eigen::VectorXd br = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) br(l) += zv(k) * dV(k, l) - vv(k) * dZ(k, l);
  double coeff = ap.dot(zv) - bp.dot(vv) + 1.0;
  out.bracket = (br - coeff * vv).cwiseAbs().maxCoeff();

  NdArray gam = christoffel_values(chart, p);
  for (int k = 0; k < n; ++k)
    for (int mm = 0; mm < n; ++mm) {
      double cv = 0, cz = 0;
      for (int a = 0; a < n; ++a) {
        cv += gam({a, k, mm}) * vf(a);
        cz += gam({a, k, mm}) * zf(a);
      }
      double lie_v = dvf(k, mm) + dvf(mm, k) - 2.0 * cv;
      double lie_z = dzf(k, mm) + dzf(mm, k) - 2.0 * cz;
      double rhs_v = (ap(k) + zf(k)) * vf(mm) + (ap(mm) + zf(mm)) * vf(k);
      double rhs_z = -2.0 * G(k, mm) + 2.0 * zf(k) * zf(mm) + bp(k) * vf(mm) +
                     bp(mm) * vf(k);
      out.lie_v = std::max(out.lie_v, std::abs(lie_v - rhs_v));
      out.lie_z = std::max(out.lie_z, std::abs(lie_z - rhs_z));
    }

  out.duality = std::abs(bp.dot(vv) - ap.dot(zv) - 1.0);
  return out;
}

NormalFormFrame change_frame(const MetricChart& chart,
                             const NormalFormFrame& frame, const Expression& f,
                             const Expression& h) {
  const int n = chart.dim;
  NormalFormFrame out;
  VectorField vbase = frame.V, zbase = frame.Z;
  Expression fe = f, he = h;
  out.V.dim = n;
  out.V.components = [vbase, fe](const Eigen::VectorXd& p, int order) {
    auto v = coord_jets(p, order);
    Jet ef = exp(fe.eval(v));
    auto c = vbase.components(p, order);
    for (Jet& x : c) x = ef * x;
    return c;
  };
  out.Z.dim = n;
  out.Z.components = [vbase, zbase, he](const Eigen::VectorXd& p, int order) {
    auto v = coord_jets(p, order);
    Jet hj = he.eval(v);
    auto c = zbase.components(p, order);
    auto cv = vbase.components(p, order);
    for (int i = 0; i < static_cast<int>(c.size()); ++i) c[i] += hj * cv[i];
    return c;
  };
  auto comp = chart.components;
  CovectorField a0 = frame.alpha, b0 = frame.beta;
  out.alpha = [comp, vbase, a0, fe, he, n](const Eigen::VectorXd& p) {
    auto v = coord_jets(p, 1);
    Jet fj = fe.eval(v), hj = he.eval(v);
    Eigen::VectorXd df(n);
    for (int k = 0; k < n; ++k) df(k) = d1(fj, k, n);
    auto gj = comp(p, 0);
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = gj[i * n + j].value();
    auto vc = vbase.components(p, 0);
    Eigen::VectorXd vv(n);
    for (int l = 0; l < n; ++l) vv(l) = vc[l].value();
    return Eigen::VectorXd(a0(p) + df - hj.value() * (G * vv));
  };
  out.beta = [comp, vbase, zbase, a0, b0, fe, he, n](const Eigen::VectorXd& p) {
    auto v = coord_jets(p, 1);
    Jet fj = fe.eval(v), hj = he.eval(v);
    Eigen::VectorXd dh(n);
    for (int k = 0; k < n; ++k) dh(k) = d1(hj, k, n);
    auto gj = comp(p, 0);
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = gj[i * n + j].value();
    auto vc = vbase.components(p, 0);
    auto zc = zbase.components(p, 0);
    Eigen::VectorXd vv(n), zv(n);
    for (int l = 0; l < n; ++l) {
      vv(l) = vc[l].value();
      zv(l) = zc[l].value();
    }
    double hv = hj.value();
    return Eigen::VectorXd(std::exp(-fj.value()) *
                           (b0(p) + hv * a0(p) + dh - hv * (G * zv) -
                            hv * hv * (G * vv)));
  };
  return out;
}

double geodesic_residual(const MetricChart& chart, const VectorField& V,
                         const Eigen::VectorXd& p) {
  const int n = chart.dim;
  auto vj = V.components(p, 1);
  NdArray gam = christoffel_values(chart, p);
  Eigen::VectorXd vv(n), acc = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < n; ++l) vv(l) = vj[l].value();
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      acc(l) += vv(k) * d1(vj[l], k, n);
      for (int a = 0; a < n; ++a) acc(l) += gam({l, k, a}) * vv(k) * vv(a);
    }
  }
  double lambda = acc.dot(vv) / vv.squaredNorm();
  return (acc - lambda * vv).cwiseAbs().maxCoeff();
}

ConePlaneCheck cone_null_plane_check(const NullPlaneData& data,
                                     const EtaField& eta, int grid_count) {
  MetricChart base = build_metric(data, eta);
  MetricChart cch = cone(base);
  const int N = base.dim + 1, ti = data.m0_dim, si = ti + 1;
  VectorField V = VectorField::coordinate(N, 1 + ti);
  VectorField W;
  W.dim = N;
  const int sc = 1 + si;
  W.components = [N, sc](const Eigen::VectorXd& p, int order) {
    std::vector<Jet> c(N, Jet::constant(0.0, N, order));
    c[0] = Jet::variable(p(0), 0, N, order);
    c[sc] = Jet::constant(1.0, N, order);
    return c;
  };
  auto grid = sample_grid(cch, grid_count, 0);
  std::vector<double> par(grid.size(), 0.0), fra(grid.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next.fetch_add(1); idx < grid.size();
         idx = next.fetch_add(1)) {
      const Eigen::VectorXd& p = grid[idx];
      par[idx] = parallel_plane_residual(cch, V, W, p);
      Eigen::MatrixXd G = metric_values(cch, p);
      auto vc = V.components(p, 0);
      auto wc = W.components(p, 0);
      Eigen::VectorXd vv(N), wv(N);
      for (int l = 0; l < N; ++l) {
        vv(l) = vc[l].value();
        wv(l) = wc[l].value();
      }
      fra[idx] = std::max({std::abs(vv.dot(G * vv)), std::abs(wv.dot(G * wv)),
                           std::abs(vv.dot(G * wv))});
    }
  };
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t nthreads = std::min<std::size_t>(hw, grid.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  ConePlaneCheck out;
  for (double x : par) out.parallel = std::max(out.parallel, x);
  for (double x : fra) out.frame = std::max(out.frame, x);
  return out;
}

EtaField corrupt_eta_t(const EtaField& eta, double amount) {
  EtaField out = eta;
  JetFunction base = eta.eta_t;
  const int ti = eta.m0_dim;
  out.eta_t = [base, ti, amount](std::span<const Jet> v) {
    return base(v) + v[ti] * amount;
  };
  return out;
}

NormalFormFrame corrupt_beta(const NormalFormFrame& frame, int component,
                             double amount) {
  NormalFormFrame out = frame;
  CovectorField base = frame.beta;
  out.beta = [base, component, amount](const Eigen::VectorXd& p) {
    Eigen::VectorXd b = base(p);
    b(component) += amount;
    return b;
  };
  return out;
}

NullPlaneData null_plane_data_from_json(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  NullPlaneData d;
  d.m0_dim = doc.at("m0_dim").get<int>();
  if (d.m0_dim < 0)
    throw std::invalid_argument("null plane config: m0_dim < 0");
  const int m = d.m0_dim;
  d.label = doc.value("label", std::string("null_plane"));

  std::vector<std::string> xs;
  for (int i = 0; i < m; ++i) xs.push_back("x" + std::to_string(i + 1));
  std::vector<std::string> names_u{"u"};
  std::vector<std::string> names_xu = xs;
  names_xu.push_back("u");
  std::vector<std::string> names_xsu = xs;
  names_xsu.push_back("s");
  names_xsu.push_back("u");
  std::vector<std::string> names_xtsu = xs;
  names_xtsu.push_back("t");
  names_xtsu.push_back("s");
  names_xtsu.push_back("u");

  auto wrap = [](Expression e) -> JetFunction {
    return [e](std::span<const Jet> v) { return e.eval(v); };
  };
  d.f1 = wrap(Expression::parse(doc.at("f1").get<std::string>(), names_u));
  d.f2 = wrap(Expression::parse(doc.at("f2").get<std::string>(), names_xsu));
  if (doc.contains("c")) {
    if (static_cast<int>(doc["c"].size()) != m)
      throw std::invalid_argument("null plane config: c must have m0_dim entries");
    for (const auto& cell : doc["c"])
      d.c.push_back(wrap(Expression::parse(cell.get<std::string>(), names_xu)));
  } else {
    for (int i = 0; i < m; ++i)
      d.c.push_back(wrap(Expression::parse("0", names_xu)));
  }
  if (m > 0) {
    const auto& rows = doc.at("g0");
    if (static_cast<int>(rows.size()) != m)
      throw std::invalid_argument("null plane config: g0 must have m0_dim rows");
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument(
            "null plane config: g0 rows must have m0_dim entries");
      for (const auto& cell : row)
        d.g0.push_back(
            wrap(Expression::parse(cell.get<std::string>(), names_xu)));
    }
  }
  if (doc.contains("eta_u"))
    d.eta_u = wrap(Expression::parse(doc["eta_u"].get<std::string>(), names_xtsu));
  if (doc.contains("domain")) {
    for (const auto& pair : doc["domain"])
      d.domain.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    if (static_cast<int>(d.domain.size()) != m + 3)
      throw std::invalid_argument(
          "null plane config: domain must cover (x, t, s, u)");
  }
  return d;
}

NullPlaneData null_plane_data_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("null plane config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return null_plane_data_from_json(ss.str());
}

std::string builtin_null_plane_config(const std::string& name) {
  if (name == "basic")
    return R"({"label":"null_plane_basic","m0_dim":1,"f1":"1","f2":"0","c":["0"],"g0":[["1"]]})";
  if (name == "coupled")
    return R"({"label":"null_plane_coupled","m0_dim":1,"f1":"1","f2":"x1","c":["0"],"g0":[["1"]]})";
  if (name == "resonant")
    return R"({"label":"null_plane_resonant","m0_dim":1,"f1":"1","f2":"exp(-2*s)*x1","c":["0.7"],"g0":[["1"]]})";
  if (name == "ufamily")
    return R"({"label":"null_plane_ufamily","m0_dim":1,"f1":"1+0.5*u","f2":"0.3*u*x1","c":["0.2"],"g0":[["1+u^2"]],"eta_u":"0.1*t*s+0.05*x1"})";
  if (name == "minimal")
    return R"({"label":"null_plane_minimal","m0_dim":0,"f1":"1","f2":"0"})";
  throw std::invalid_argument("unknown builtin null plane config: " + name);
}

}  // namespace conelab
