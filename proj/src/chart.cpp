#include "conelab/chart.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "conelab/linalg.hpp"

namespace conelab {

bool MetricChart::in_domain(const Eigen::VectorXd& p) const {
  if (p.size() != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (p(i) < domain[i].first - 1e-12 || p(i) > domain[i].second + 1e-12)
      return false;
  return true;
}

VectorField VectorField::coordinate(int dim, int index) {
  VectorField f;
  f.dim = dim;
  f.components = [dim, index](const Eigen::VectorXd&, int order) {
    std::vector<Jet> out(dim, Jet(dim, order));
    out[index] = Jet::constant(1.0, dim, order);
    return out;
  };
  return f;
}

namespace {

std::vector<Jet> coordinate_jets(const Eigen::VectorXd& p, int order) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(Jet::variable(p(i), i, n, order));
  return v;
}

std::vector<Jet> jet_matrix_inverse(std::vector<Jet> A, int n) {
  const Jet zero = A[0] * 0.0;
  std::vector<Jet> B(n * n, zero);
  for (int i = 0; i < n; ++i) B[i * n + i] = zero + 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col].value()) > std::abs(A[piv * n + col].value()))
        piv = r;
    if (std::abs(A[piv * n + col].value()) < 1e-13)
      throw std::invalid_argument("chart: metric singular at evaluation point");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(A[col * n + c], A[piv * n + c]);
        std::swap(B[col * n + c], B[piv * n + c]);
      }
    Jet inv = inverse(A[col * n + col]);
    for (int c = 0; c < n; ++c) {
      A[col * n + c] = A[col * n + c] * inv;
      B[col * n + c] = B[col * n + c] * inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Jet f = A[r * n + col];
      if (f.max_abs() == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        A[r * n + c] -= f * A[col * n + c];
        B[r * n + c] -= f * B[col * n + c];
      }
    }
  }
  return B;
}

NdJet truncate_nd(const NdJet& T, int order) {
  NdJet out(T.n, T.rank, T.a.empty() ? Jet() : T.a[0].truncated(order));
  for (std::size_t i = 0; i < T.a.size(); ++i) out.a[i] = T.a[i].truncated(order);
  return out;
}

// Tensorial covariant derivative of a jet tensor whose slots are all
// coordinate-lowered except the one at upper_pos. Output gains a leading
// derivative slot; jet order drops by one.
NdJet covariant_derivative(const NdJet& T, const NdJet& Gamma, int upper_pos) {
  const int n = T.n, rank = T.rank;
  const int ord = T.a[0].order() - 1;
  NdJet Ttr = truncate_nd(T, ord);
  NdJet Gam = truncate_nd(Gamma, ord);
  NdJet out(n, rank + 1, Jet(T.a[0].nvars(), ord));
  std::vector<int> idx(rank, 0);
  const std::size_t total = T.a.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    {
      std::size_t f = flat;
      for (int a = rank - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(f % n);
        f /= n;
      }
    }
    for (int m = 0; m < n; ++m) {
      Jet acc = T.a[flat].partial(m);
      const int lu = idx[upper_pos];
      for (int e = 0; e < n; ++e) {
        int keep = idx[upper_pos];
        idx[upper_pos] = e;
        const Jet& te = Ttr.at(idx);
        idx[upper_pos] = keep;
        acc += Gam({lu, m, e}) * te;
      }
      for (int a = 0; a < rank; ++a) {
        if (a == upper_pos) continue;
        const int la = idx[a];
        for (int e = 0; e < n; ++e) {
          int keep = idx[a];
          idx[a] = e;
          const Jet& te = Ttr.at(idx);
          idx[a] = keep;
          acc -= Gam({e, m, la}) * te;
        }
      }
      out.a[static_cast<std::size_t>(m) * total + flat] = acc;
    }
  }
  return out;
}

}  // namespace

CurvatureJet curvature_jet(const MetricChart& chart, const Eigen::VectorXd& p,
                           int max_order) {
  if (max_order < 0) throw std::invalid_argument("curvature_jet: negative order");
  if (!chart.in_domain(p))
    throw std::invalid_argument("curvature_jet: point outside chart domain");
  const int n = chart.dim;
  const int J = max_order + 2;
  std::vector<Jet> G = chart.components(p, J);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if ((G[i * n + j] - G[j * n + i]).max_abs() > 1e-12)
        throw std::invalid_argument("curvature_jet: metric components not symmetric");
  std::vector<Jet> Gi = jet_matrix_inverse(G, n);

  NdJet dG(n, 3, Jet(n, J - 1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dG({a, b, c}) = G[b * n + c].partial(a);

  NdJet Gamma(n, 3, Jet(n, J - 1));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet acc(n, J - 1);
        for (int l = 0; l < n; ++l)
          acc += Gi[k * n + l].truncated(J - 1) *
                 (dG({i, j, l}) + dG({j, i, l}) - dG({l, i, j}));
        acc *= 0.5;
        Gamma({k, i, j}) = acc;
        Gamma({k, j, i}) = acc;
      }

  const int Kord = J - 2;  // jet order available for R
  NdJet R(n, 4, Jet(n, Kord));
  {
    NdJet Gtr = truncate_nd(Gamma, Kord);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
          for (int c = 0; c < n; ++c) {
            Jet acc = Gamma({l, j, c}).partial(i) - Gamma({l, i, c}).partial(j);
            for (int m = 0; m < n; ++m)
              acc += Gtr({l, i, m}) * Gtr({m, j, c}) -
                     Gtr({l, j, m}) * Gtr({m, i, c});
            R({l, i, j, c}) = acc;
            R({l, j, i, c}) = -acc;
          }
  }

  CurvatureJet cj;
  cj.point = p;
  cj.dim = n;
  cj.metric.resize(n, n);
  cj.metric_inv.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cj.metric(i, j) = G[i * n + j].value();
      cj.metric_inv(i, j) = Gi[i * n + j].value();
    }
  cj.metric_jets = std::move(G);
  cj.christoffel_jets = Gamma;
  cj.christoffel = Gamma.values();
  cj.derivs.push_back(R.values());

  NdJet prev = std::move(R);
  for (int q = 1; q <= max_order; ++q) {
    NdJet next = covariant_derivative(prev, Gamma, q - 1);
    cj.derivs.push_back(next.values());
    prev = std::move(next);
  }
  return cj;
}

Eigen::MatrixXd ricci(const CurvatureJet& cj) {
  const int n = cj.dim;
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) ric(i, j) += cj.derivs[0]({l, l, i, j});
  return ric;
}

CurvatureInvariants curvature_invariants(const CurvatureJet& cj) {
  const int n = cj.dim;
  const NdArray& R = cj.derivs[0];
  CurvatureInvariants out{0, std::numeric_limits<double>::quiet_NaN(), 0, 0};
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c)
          out.first_bianchi =
              std::max(out.first_bianchi,
                       std::abs(R({l, i, j, c}) + R({l, j, c, i}) + R({l, c, i, j})));
  // Lowered tensor: antisymmetry in the last index pair.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double lcd = 0, ldc = 0;
          for (int l = 0; l < n; ++l) {
            lcd += cj.metric(l, d) * R({l, i, j, c});
            ldc += cj.metric(l, c) * R({l, i, j, d});
          }
          out.lower_antisymmetry = std::max(out.lower_antisymmetry, std::abs(lcd + ldc));
        }
  // nabla g = 0.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = cj.metric_jets[i * cj.dim + j].partial(k).value();
        for (int m = 0; m < n; ++m)
          v -= cj.christoffel({m, k, i}) * cj.metric(m, j) +
               cj.christoffel({m, k, j}) * cj.metric(i, m);
        out.metricity = std::max(out.metricity, std::abs(v));
      }
  if (cj.derivs.size() >= 2) {
    const NdArray& DR = cj.derivs[1];
    out.second_bianchi = 0;
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int c = 0; c < n; ++c)
              out.second_bianchi = std::max(
                  out.second_bianchi,
                  std::abs(DR({m, l, i, j, c}) + DR({i, l, j, m, c}) +
                           DR({j, l, m, i, c})));
  }
  return out;
}

double constant_curvature_residual(const MetricChart& chart,
                                   const Eigen::VectorXd& p, double kappa) {
  CurvatureJet cj = curvature_jet(chart, p, 0);
  const int n = chart.dim;
  double res = 0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) {
          double expect = kappa * (cj.metric(j, c) * (l == i ? 1.0 : 0.0) -
                                   cj.metric(i, c) * (l == j ? 1.0 : 0.0));
          res = std::max(res, std::abs(cj.derivs[0]({l, i, j, c}) - expect));
        }
  return res;
}

NdArray christoffel_values(const MetricChart& chart, const Eigen::VectorXd& p) {
  const int n = chart.dim;
  std::vector<Jet> G = chart.components(p, 1);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = G[i * n + j].value();
  Eigen::MatrixXd gi = g.inverse();
  NdArray dg(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dg({a, b, c}) = G[b * n + c].partial(a).value();
  NdArray Gamma(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int l = 0; l < n; ++l)
          acc += gi(k, l) * (dg({i, j, l}) + dg({j, i, l}) - dg({l, i, j}));
        Gamma({k, i, j}) = 0.5 * acc;
      }
  return Gamma;
}

double homothety_residual(const MetricChart& chart, const VectorField& xi,
                          const Eigen::VectorXd& p, double a) {
  const int n = chart.dim;
  NdArray Gamma = christoffel_values(chart, p);
  std::vector<Jet> X = xi.components(p, 1);
  double res = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double v = X[k].partial(i).value();
      for (int m = 0; m < n; ++m) v += Gamma({k, i, m}) * X[m].value();
      v -= (i == k ? a : 0.0);
      res = std::max(res, std::abs(v));
    }
  return res;
}

std::vector<Eigen::VectorXd> sample_grid(const MetricChart& chart, int count,
                                         std::uint64_t seed) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  const std::uint64_t offset = 1 + (seed % 4096);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd h = halton_point(offset + k, chart.dim);
    Eigen::VectorXd p(chart.dim);
    for (int i = 0; i < chart.dim; ++i) {
      auto [lo, hi] = chart.domain[i];
      p(i) = lo + h(i) * (hi - lo);
    }
    pts.push_back(p);
  }
  return pts;
}

Signature signature_at(const MetricChart& chart, const Eigen::VectorXd& p) {
  std::vector<Jet> G = chart.components(p, 0);
  Eigen::MatrixXd g(chart.dim, chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int j = 0; j < chart.dim; ++j) g(i, j) = G[i * chart.dim + j].value();
  return QuadraticSpace::from_metric(g).signature;
}

// --- catalog -------------------------------------------------------------

MetricChart flat_chart(int t, int s) {
  MetricChart ch;
  ch.dim = t + s;
  ch.signature = {t, s};
  for (int i = 0; i < ch.dim; ++i) {
    ch.coord_names.push_back("x" + std::to_string(i + 1));
    ch.domain.push_back({-1.0, 1.0});
  }
  ch.label = "flat(" + std::to_string(t) + "," + std::to_string(s) + ")";
  const int n = ch.dim;
  ch.components = [n, t](const Eigen::VectorXd&, int order) {
    std::vector<Jet> g(n * n, Jet(n, order));
    for (int i = 0; i < n; ++i)
      g[i * n + i] = Jet::constant(i < t ? -1.0 : 1.0, n, order);
    return g;
  };
  return ch;
}

MetricChart sphere_chart(int n) {
  if (n < 1) throw std::invalid_argument("sphere chart: dimension >= 1");
  MetricChart ch;
  ch.dim = n;
  ch.signature = {0, n};
  for (int i = 0; i < n; ++i) ch.coord_names.push_back("th" + std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) ch.domain.push_back({0.4, 2.74});
  ch.domain.push_back(n > 1 ? std::make_pair(-3.0, 3.0) : std::make_pair(0.4, 2.74));
  ch.label = "sphere(" + std::to_string(n) + ")";
  ch.components = [n](const Eigen::VectorXd& p, int order) {
    auto v = coordinate_jets(p, order);
    std::vector<Jet> g(n * n, Jet(n, order));
    Jet prefix = Jet::constant(1.0, n, order);
    for (int i = 0; i < n; ++i) {
      g[i * n + i] = prefix;
      if (i + 1 < n) {
        Jet si = sin(v[i]);
        prefix = prefix * si * si;
      }
    }
    return g;
  };
  return ch;
}

MetricChart hyperbolic_chart(int n) {
  if (n < 2) throw std::invalid_argument("hyperbolic chart: dimension >= 2");
  MetricChart ch;
  ch.dim = n;
  ch.signature = {0, n};
  for (int i = 0; i < n; ++i) ch.coord_names.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) ch.domain.push_back({-1.0, 1.0});
  ch.domain.push_back({0.5, 2.0});
  ch.label = "hyperbolic(" + std::to_string(n) + ")";
  ch.components = [n](const Eigen::VectorXd& p, int order) {
    auto v = coordinate_jets(p, order);
    std::vector<Jet> g(n * n, Jet(n, order));
    Jet w = inverse(v[n - 1] * v[n - 1]);
    for (int i = 0; i < n; ++i) g[i * n + i] = w;
    return g;
  };
  return ch;
}

namespace {

// Shared frame for profile-type charts: coords (x, y1..ym, z),
// g = 2 dx dz + h(x, y, z) dz^2 + sum (dy^i)^2 with h supplied as jets.
MetricChart profile_chart(int m, std::string label,
                          std::function<Jet(std::span<const Jet>)> h) {
  MetricChart ch;
  const int n = m + 2;
  ch.dim = n;
  ch.signature = {1, m + 1};
  ch.coord_names.push_back("x");
  for (int i = 0; i < m; ++i) ch.coord_names.push_back("y" + std::to_string(i + 1));
  ch.coord_names.push_back("z");
  for (int i = 0; i < n; ++i) ch.domain.push_back({-1.0, 1.0});
  ch.label = std::move(label);
  ch.components = [n, h](const Eigen::VectorXd& p, int order) {
    auto v = coordinate_jets(p, order);
    std::vector<Jet> g(n * n, Jet(n, order));
    g[0 * n + (n - 1)] = Jet::constant(1.0, n, order);
    g[(n - 1) * n + 0] = g[0 * n + (n - 1)];
    for (int i = 1; i < n - 1; ++i) g[i * n + i] = Jet::constant(1.0, n, order);
    g[(n - 1) * n + (n - 1)] = h(v);
    return g;
  };
  return ch;
}

}  // namespace

MetricChart pp_wave_chart(int m, const Expression& profile, std::string label) {
  if (m < 1) throw std::invalid_argument("pp_wave chart: needs a transverse direction");
  return profile_chart(m, std::move(label), [profile](std::span<const Jet> v) {
    return 2.0 * profile.eval(v);
  });
}

MetricChart cahen_wallach_chart(const Eigen::MatrixXd& S) {
  const int m = static_cast<int>(S.rows());
  if (S.cols() != m || m < 1 ||
      (S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("cahen_wallach chart: S must be symmetric");
  if (std::abs(S.determinant()) < 1e-12)
    throw std::invalid_argument("cahen_wallach chart: S must be invertible");
  std::ostringstream lbl;
  lbl << "cahen_wallach(m=" << m << ")";
  return profile_chart(m, lbl.str(), [S, m](std::span<const Jet> v) {
    Jet acc(v[0].nvars(), v[0].order());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (S(i, j) != 0.0) acc += S(i, j) * (v[1 + i] * v[1 + j]);
    return acc;
  });
}

MetricChart plane_wave_exp_chart() {
  return profile_chart(1, "plane_wave_exp", [](std::span<const Jet> v) {
    return exp(v[2]) * v[1] * v[1];
  });
}

MetricChart recurrent_wave_chart() {
  return profile_chart(1, "recurrent_wave", [](std::span<const Jet> v) {
    return 2.0 * v[0] * v[1];
  });
}

MetricChart custom_chart_from_json(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  MetricChart ch;
  ch.label = doc.value("label", "custom");
  ch.coord_names = doc.at("coordinates").get<std::vector<std::string>>();
  ch.dim = static_cast<int>(ch.coord_names.size());
  for (const auto& pair : doc.at("domain"))
    ch.domain.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
  if (static_cast<int>(ch.domain.size()) != ch.dim)
    throw std::invalid_argument("custom chart: domain/coordinate count mismatch");
  const auto& rows = doc.at("components");
  if (static_cast<int>(rows.size()) != ch.dim)
    throw std::invalid_argument("custom chart: component rows mismatch");
  std::vector<Expression> exprs;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != ch.dim)
      throw std::invalid_argument("custom chart: component columns mismatch");
    for (const auto& cell : row)
      exprs.push_back(Expression::parse(cell.get<std::string>(), ch.coord_names));
  }
  const int n = ch.dim;
  ch.components = [n, exprs](const Eigen::VectorXd& p, int order) {
    auto v = coordinate_jets(p, order);
    std::vector<Jet> g;
    g.reserve(n * n);
    for (const auto& e : exprs) g.push_back(e.eval(v));
    // Symmetrize so mildly asymmetric documents still define a metric.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        Jet s = (g[i * n + j] + g[j * n + i]) * 0.5;
        g[i * n + j] = s;
        g[j * n + i] = s;
      }
    return g;
  };
  Eigen::VectorXd center(ch.dim);
  for (int i = 0; i < ch.dim; ++i)
    center(i) = 0.5 * (ch.domain[i].first + ch.domain[i].second);
  ch.signature = signature_at(ch, center);
  if (doc.contains("signature")) {
    Signature declared{doc["signature"].at(0).get<int>(),
                       doc["signature"].at(1).get<int>()};
    if (!(declared == ch.signature))
      throw std::invalid_argument("custom chart: declared signature mismatch");
  }
  return ch;
}

MetricChart base_chart_by_id(const std::string& id) {
  if (id.rfind("flat", 0) == 0) {
    auto us = id.find('_', 4);
    if (us != std::string::npos) {
      int t = std::stoi(id.substr(4, us - 4));
      int s = std::stoi(id.substr(us + 1));
      return flat_chart(t, s);
    }
  }
  if (id.rfind("sphere", 0) == 0 && id.size() > 6)
    return sphere_chart(std::stoi(id.substr(6)));
  if (id.rfind("hyperbolic", 0) == 0 && id.size() > 10)
    return hyperbolic_chart(std::stoi(id.substr(10)));
  if (id == "cahen_wallach") return cahen_wallach_chart(Eigen::Matrix2d::Identity());
  if (id == "plane_wave_exp") return plane_wave_exp_chart();
  if (id == "pp_wave_sq2") {
    std::vector<std::string> names = {"x", "y1", "y2", "z"};
    return pp_wave_chart(2, Expression::parse("y1^2 + y2^2", names),
                         "pp_wave(y1^2+y2^2)");
  }
  if (id == "recurrent_wave") return recurrent_wave_chart();
  if (id.size() > 5 && id.substr(id.size() - 5) == ".json") {
    std::ifstream in(id);
    if (!in) throw std::invalid_argument("chart document not readable: " + id);
    std::ostringstream ss;
    ss << in.rdbuf();
    return custom_chart_from_json(ss.str());
  }
  throw std::invalid_argument("unknown chart id: " + id);
}

}  // namespace conelab
