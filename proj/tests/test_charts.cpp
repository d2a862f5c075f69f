#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "conelab/chart.hpp"
#include "doctest.h"

using namespace conelab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd pt(std::initializer_list<double> v) {
  VectorXd p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

// Independent connection oracle: centered finite differences of the metric
// components, Gamma^k_ij = g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)/2.
NdArray finite_difference_christoffel(const MetricChart& chart,
                                      const VectorXd& p, double h) {
  const int n = chart.dim;
  auto metric_at = [&](const VectorXd& q) {
    std::vector<Jet> g = chart.components(q, 0);
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g[i * n + j].value();
    return m;
  };
  std::vector<MatrixXd> dg(n);
  for (int l = 0; l < n; ++l) {
    VectorXd hi = p, lo = p;
    hi(l) += h;
    lo(l) -= h;
    dg[l] = (metric_at(hi) - metric_at(lo)) / (2 * h);
  }
  MatrixXd ginv = metric_at(p).inverse();
  NdArray out(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int l = 0; l < n; ++l)
          acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out({k, i, j}) = acc / 2;
      }
  return out;
}

}  // namespace

TEST_SUITE("charts") {

TEST_CASE("round sphere connection matches the closed form") {
  MetricChart s2 = sphere_chart(2);
  NdArray g = christoffel_values(s2, pt({M_PI / 3, 0.0}));
  // Gamma^th_phph = -sin th cos th, Gamma^ph_thph = cot th
  CHECK(g({0, 1, 1}) ==
        doctest::Approx(-std::sqrt(3.0) / 4).epsilon(1e-12));
  CHECK(g({1, 0, 1}) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(g({0, 0, 0}) == doctest::Approx(0.0));
  CHECK(g({1, 1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("jet connection agrees with a finite-difference oracle") {
  for (const char* id : {"sphere2", "hyperbolic3", "pp_wave_sq2"}) {
    MetricChart chart = base_chart_by_id(id);
    VectorXd p = sample_grid(chart, 5, 3)[4];
    NdArray jets = christoffel_values(chart, p);
    NdArray fd = finite_difference_christoffel(chart, p, 1e-5);
    double worst = 0;
    for (std::size_t i = 0; i < jets.a.size(); ++i)
      worst = std::max(worst, std::abs(jets.a[i] - fd.a[i]));
    CAPTURE(id);
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("sphere is Einstein with Ricci equal to the metric") {
  MetricChart s2 = sphere_chart(2);
  CurvatureJet cj = curvature_jet(s2, pt({M_PI / 3, 0.2}), 0);
  MatrixXd ric = ricci(cj);
  CHECK((ric - cj.metric).cwiseAbs().maxCoeff() < 1e-12);
  // sphere(3): Ric = (n-1) g = 2 g
  MetricChart s3 = sphere_chart(3);
  CurvatureJet cj3 = curvature_jet(s3, pt({1.1, 0.9, 0.3}), 0);
  CHECK((ricci(cj3) - 2 * cj3.metric).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("constant curvature residuals single out the right kappa") {
  MetricChart s2 = sphere_chart(2);
  MetricChart h2 = hyperbolic_chart(2);
  VectorXd ps = pt({1.0, 0.5});
  VectorXd ph = pt({0.2, 1.1});
  CHECK(constant_curvature_residual(s2, ps, 1.0) < 1e-11);
  CHECK(constant_curvature_residual(h2, ph, -1.0) < 1e-11);
  CHECK(constant_curvature_residual(s2, ps, -1.0) > 0.1);
  CHECK(constant_curvature_residual(h2, ph, 1.0) > 0.1);
  // flat space is kappa = 0
  CHECK(constant_curvature_residual(flat_chart(1, 2), pt({0, 0, 0}), 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("curvature invariants hold on curved catalog charts") {
  for (const char* id : {"sphere2", "hyperbolic2", "cahen_wallach"}) {
    MetricChart chart = base_chart_by_id(id);
    VectorXd p = sample_grid(chart, 3, 7)[2];
    CurvatureJet cj = curvature_jet(chart, p, 1);
    CurvatureInvariants inv = curvature_invariants(cj);
    CAPTURE(id);
    CHECK(inv.first_bianchi < 1e-10);
    CHECK(inv.second_bianchi < 1e-10);
    CHECK(inv.metricity < 1e-10);
    CHECK(inv.lower_antisymmetry < 1e-10);
  }
}

TEST_CASE("profile-type charts are locally symmetric when expected") {
  // cahen_wallach has parallel curvature; the exponential profile does not
  MetricChart cw = base_chart_by_id("cahen_wallach");
  CurvatureJet cj = curvature_jet(cw, pt({0.2, 0.3, -0.4, 0.5}), 1);
  CHECK(cj.derivs[1].max_abs() < 1e-11);
  MetricChart pw = base_chart_by_id("plane_wave_exp");
  CurvatureJet pj = curvature_jet(pw, pt({0.1, 0.2, 0.3}), 1);
  CHECK(pj.derivs[1].max_abs() > 0.1);
}

TEST_CASE("signature_at counts metric eigenvalue signs on a grid") {
  struct Case {
    const char* id;
    Signature expected;
  };
  for (const Case& c : {Case{"flat1_2", {1, 2}}, Case{"sphere2", {0, 2}},
                        Case{"hyperbolic2", {0, 2}}, Case{"cahen_wallach", {1, 3}},
                        Case{"pp_wave_sq2", {1, 3}}}) {
    MetricChart chart = base_chart_by_id(c.id);
    CHECK(chart.signature == c.expected);
    for (const VectorXd& p : sample_grid(chart, 6, 1)) {
      CHECK(chart.in_domain(p));
      CHECK(signature_at(chart, p) == c.expected);
    }
  }
}

TEST_CASE("sample_grid is deterministic and respects the domain box") {
  MetricChart h3 = hyperbolic_chart(3);
  auto a = sample_grid(h3, 16, 42);
  auto b = sample_grid(h3, 16, 42);
  auto c = sample_grid(h3, 16, 43);
  REQUIRE(a.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
  bool any_different = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    any_different = any_different || (a[i] - c[i]).norm() > 0;
  CHECK(any_different);
}

TEST_CASE("catalog lookup parses ids and rejects unknown ones") {
  CHECK(base_chart_by_id("flat2_3").dim == 5);
  CHECK(base_chart_by_id("flat2_3").signature == Signature{2, 3});
  CHECK(base_chart_by_id("sphere4").dim == 4);
  CHECK(base_chart_by_id("hyperbolic2").dim == 2);
  CHECK(base_chart_by_id("cahen_wallach").dim == 4);
  CHECK(base_chart_by_id("pp_wave_sq2").dim == 4);
  CHECK(base_chart_by_id("recurrent_wave").dim == 3);
  CHECK_THROWS_AS((void)base_chart_by_id("torus7"), std::exception);
}

TEST_CASE("custom charts load from JSON and validate their shape") {
  // polar-coordinate flat plane: curvature must vanish identically
  const char* doc = R"({
    "label": "polar",
    "coordinates": ["r", "phi"],
    "domain": [[0.5, 2.0], [-3.0, 3.0]],
    "components": [["1", "0"], ["0", "r^2"]]
  })";
  MetricChart polar = custom_chart_from_json(doc);
  CHECK(polar.dim == 2);
  CHECK(polar.signature == Signature{0, 2});
  CHECK(constant_curvature_residual(polar, pt({1.3, 0.4}), 0.0) < 1e-12);

  const char* bad_domain = R"({
    "coordinates": ["x", "y"],
    "domain": [[0, 1]],
    "components": [["1", "0"], ["0", "1"]]
  })";
  CHECK_THROWS_AS((void)custom_chart_from_json(bad_domain), std::exception);

  const char* bad_signature = R"({
    "coordinates": ["x"],
    "domain": [[0, 1]],
    "components": [["1"]],
    "signature": [1, 0]
  })";
  CHECK_THROWS_AS((void)custom_chart_from_json(bad_signature), std::exception);
}

TEST_CASE("cahen_wallach rejects non-symmetric or singular profiles") {
  MatrixXd s(2, 2);
  s << 1, 2, 0, 1;
  CHECK_THROWS_AS((void)cahen_wallach_chart(s), std::exception);
  CHECK_THROWS_AS((void)cahen_wallach_chart(MatrixXd::Zero(2, 2)),
                  std::exception);
}

TEST_CASE("in_domain tests the closed coordinate box") {
  MetricChart s2 = sphere_chart(2);
  CHECK(s2.in_domain(pt({0.4, -3.0})));
  CHECK(s2.in_domain(pt({2.74, 3.0})));
  CHECK_FALSE(s2.in_domain(pt({0.39, 0.0})));
  CHECK_FALSE(s2.in_domain(pt({1.0, 3.01})));
}

}  // TEST_SUITE
