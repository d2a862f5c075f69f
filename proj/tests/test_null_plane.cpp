#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "conelab/null_plane.hpp"
#include "doctest.h"

using namespace conelab;
using Eigen::VectorXd;

namespace {

VectorXd pt(std::initializer_list<double> v) {
  VectorXd p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

NullPlaneData builtin(const std::string& name) {
  return null_plane_data_from_json(builtin_null_plane_config(name));
}

double eval_slot(const JetFunction& f, const VectorXd& p) {
  std::vector<Jet> v;
  for (int i = 0; i < p.size(); ++i)
    v.push_back(Jet::variable(p(i), i, static_cast<int>(p.size()), 2));
  return f(v).value();
}

// plain recursive Simpson quadrature, the independent oracle for the
// integral term of the transverse covector components
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth = 0) {
  double m = (a + b) / 2;
  double h = b - a;
  double whole = h / 6 * (f(a) + 4 * f(m) + f(b));
  double lm = (a + m) / 2, rm = (m + b) / 2;
  double left = h / 12 * (f(a) + 4 * f(lm) + f(m));
  double right = h / 12 * (f(m) + 4 * f(rm) + f(b));
  if (depth > 40 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, tol / 2, depth + 1) +
         adaptive_simpson(f, m, b, tol / 2, depth + 1);
}

}  // namespace

TEST_SUITE("null_plane") {

TEST_CASE("solved covector satisfies its defining system on all examples") {
  for (const char* name : {"basic", "coupled", "resonant", "ufamily", "minimal"}) {
    NullPlaneData data = builtin(name);
    EtaField eta = solve_eta(data);
    CAPTURE(name);
    CHECK(eta_system_residual(data, eta, 24) < 1e-11);
  }
}

TEST_CASE("basic example has the closed-form covector") {
  NullPlaneData data = builtin("basic");
  EtaField eta = solve_eta(data);
  VectorXd p = pt({0.4, 0.3, -0.5, 1.2});
  CHECK(eval_slot(eta.eta_t, p) == doctest::Approx(1.0));
  CHECK(eval_slot(eta.eta_s, p) == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(eval_slot(eta.eta_x[0], p) == doctest::Approx(0.0));
}

TEST_CASE("transverse components match closed antiderivatives") {
  // with f2 = x1 the integral term gives (1 - e^{-2s})/2; with
  // f2 = e^{-2s} x1 and offset 0.7 it gives e^{-2s}(s + 0.7)
  NullPlaneData coupled = builtin("coupled");
  NullPlaneData resonant = builtin("resonant");
  EtaField ce = solve_eta(coupled);
  EtaField re = solve_eta(resonant);
  for (double s : {-0.9, -0.2, 0.5, 1.0}) {
    VectorXd p = pt({0.4, 0.1, s, 1.0});
    CHECK(eval_slot(ce.eta_x[0], p) ==
          doctest::Approx((1 - std::exp(-2 * s)) / 2).epsilon(1e-12));
    CHECK(eval_slot(re.eta_x[0], p) ==
          doctest::Approx(std::exp(-2 * s) * (s + 0.7)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature agrees with an independent Simpson oracle") {
  const char* doc = R"({"m0_dim":1,"f1":"1","f2":"sin(s)*x1","c":["0"],"g0":[["1"]]})";
  NullPlaneData data = null_plane_data_from_json(doc);
  EtaField eta = solve_eta(data);
  for (double s : {-0.7, 0.4, 0.95}) {
    VectorXd p = pt({0.2, 0.0, s, 1.0});
    double integral = adaptive_simpson(
        [](double r) { return std::exp(2 * r) * std::sin(r); }, 0.0, s, 1e-13);
    double expected = std::exp(-2 * s) * integral;
    CHECK(eval_slot(eta.eta_x[0], p) ==
          doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("a profile factor with a zero on the u-interval is rejected") {
  const char* doc = R"({"m0_dim":1,"f1":"u-1","f2":"0","c":["0"],"g0":[["1"]]})";
  NullPlaneData data = null_plane_data_from_json(doc);
  try {
    (void)solve_eta(data);
    FAIL("expected rejection of a vanishing profile factor");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("nowhere vanishing") != std::string::npos);
  }
}

TEST_CASE("built metrics have the advertised shape") {
  NullPlaneData basic = builtin("basic");
  MetricChart chart = build_metric(basic, solve_eta(basic));
  CHECK(chart.dim == 4);
  CHECK(chart.signature == Signature{1, 3});
  CHECK(chart.coord_names == std::vector<std::string>{"x1", "t", "s", "u"});
  // g_tt = 0, g_ss = 1, g_tu = eta_t = 1, g_x1x1 = e^{-2s}
  VectorXd p = pt({0.3, 0.2, 0.6, 1.1});
  std::vector<Jet> g = chart.components(p, 0);
  CHECK(g[1 * 4 + 1].value() == doctest::Approx(0.0));
  CHECK(g[2 * 4 + 2].value() == doctest::Approx(1.0));
  CHECK(g[1 * 4 + 3].value() == doctest::Approx(1.0));
  CHECK(g[0 * 4 + 0].value() ==
        doctest::Approx(std::exp(-1.2)).epsilon(1e-13));

  NullPlaneData minimal = builtin("minimal");
  MetricChart small = build_metric(minimal, solve_eta(minimal));
  CHECK(small.dim == 3);
  CHECK(small.signature == Signature{1, 2});
}

TEST_CASE("degenerate base blocks are rejected at build time") {
  const char* doc = R"({"m0_dim":1,"f1":"1","f2":"0","c":["0"],"g0":[["0"]]})";
  NullPlaneData data = null_plane_data_from_json(doc);
  EtaField eta = solve_eta(data);
  CHECK_THROWS_AS((void)build_metric(data, eta), std::exception);
}

TEST_CASE("frame covectors take their closed-form values on the basic example") {
  NullPlaneData data = builtin("basic");
  EtaField eta = solve_eta(data);
  // alpha = ds - 2t du and beta = 2 dt - 4t^2 du for the trivial profile
  for (double t : {0.25, -0.4}) {
    VectorXd p = pt({0.3, t, 0.4, 1.2});
    AlphaBeta ab = alpha_beta(data, eta, p);
    CHECK(ab.alpha(0) == doctest::Approx(0.0));
    CHECK(ab.alpha(1) == doctest::Approx(0.0));
    CHECK(ab.alpha(2) == doctest::Approx(1.0));
    CHECK(ab.alpha(3) == doctest::Approx(-2 * t).epsilon(1e-12));
    CHECK(ab.beta(0) == doctest::Approx(0.0));
    CHECK(ab.beta(1) == doctest::Approx(2.0));
    CHECK(ab.beta(2) == doctest::Approx(0.0));
    CHECK(ab.beta(3) == doctest::Approx(-4 * t * t).epsilon(1e-12));
    CHECK(ab.residual < 1e-11);
  }
}

TEST_CASE("structure equations hold across the example family") {
  for (const char* name : {"coupled", "ufamily", "minimal"}) {
    NullPlaneData data = builtin(name);
    EtaField eta = solve_eta(data);
    MetricChart chart = build_metric(data, eta);
    NormalFormFrame frame = normal_form_frame(data, eta);
    CAPTURE(name);
    for (const VectorXd& p : sample_grid(chart, 6, 11)) {
      FundamentalResiduals r = fundamental_residuals(chart, frame.V, frame.Z,
                                                     frame.alpha, frame.beta, p);
      CHECK(r.max() < 1e-10);
      CHECK(geodesic_residual(chart, frame.V, p) < 1e-10);
    }
  }
}

TEST_CASE("the frame precondition is enforced") {
  NullPlaneData data = builtin("basic");
  EtaField eta = solve_eta(data);
  MetricChart chart = build_metric(data, eta);
  NormalFormFrame frame = normal_form_frame(data, eta);
  // Z is unit spacelike, so it cannot stand in for the null field V
  CHECK_THROWS_AS((void)fundamental_residuals(chart, frame.Z, frame.Z,
                                              frame.alpha, frame.beta,
                                              pt({0.1, 0.2, 0.3, 1.0})),
                  std::exception);
}

TEST_CASE("structure equations are covariant under frame rescaling and shear") {
  NullPlaneData data = builtin("coupled");
  EtaField eta = solve_eta(data);
  MetricChart chart = build_metric(data, eta);
  NormalFormFrame frame = normal_form_frame(data, eta);
  std::vector<std::string> names = {"x1", "t", "s", "u"};
  Expression f = Expression::parse("0.2*x1+0.1*u", names);
  Expression h = Expression::parse("0.3*x1", names);
  NormalFormFrame moved = change_frame(chart, frame, f, h);
  for (const VectorXd& p : sample_grid(chart, 4, 13)) {
    FundamentalResiduals r = fundamental_residuals(chart, moved.V, moved.Z,
                                                   moved.alpha, moved.beta, p);
    CHECK(r.max() < 1e-9);
    // f and h were chosen t- and s-free, so the normalization survives
    CHECK(r.duality < 1e-10);
  }
}

TEST_CASE("cone over the built chart carries the invariant null plane") {
  for (const char* name : {"basic", "ufamily"}) {
    NullPlaneData data = builtin(name);
    EtaField eta = solve_eta(data);
    ConePlaneCheck check = cone_null_plane_check(data, eta, 12);
    CAPTURE(name);
    CHECK(check.parallel < 1e-11);
    CHECK(check.frame < 1e-11);
  }
}

TEST_CASE("corrupted inputs trip the detectors") {
  NullPlaneData data = builtin("basic");
  EtaField eta = solve_eta(data);
  MetricChart chart = build_metric(data, eta);
  NormalFormFrame frame = normal_form_frame(data, eta);
  NormalFormFrame bad = corrupt_beta(frame, data.m0_dim + 1, 0.1);
  FundamentalResiduals r = fundamental_residuals(chart, bad.V, bad.Z, bad.alpha,
                                                 bad.beta, pt({0.1, 0.2, 0.3, 1.0}));
  CHECK(r.d_zflat == doctest::Approx(0.1).epsilon(1e-10));
  EtaField skewed = corrupt_eta_t(eta, 0.1);
  CHECK(eta_system_residual(data, skewed, 8) > 1e-2);
  CHECK(cone_null_plane_check(data, skewed, 8).max() > 1e-2);
}

TEST_CASE("configuration parsing validates structure") {
  CHECK_THROWS_AS((void)builtin_null_plane_config("unknown"), std::exception);
  // f1 is mandatory
  CHECK_THROWS_AS(
      (void)null_plane_data_from_json(R"({"m0_dim":1,"f2":"0","g0":[["1"]]})"),
      std::exception);
  // g0 must be m x m
  CHECK_THROWS_AS((void)null_plane_data_from_json(
                      R"({"m0_dim":2,"f1":"1","f2":"0","g0":[["1"]]})"),
                  std::exception);
  // domain must cover every coordinate
  CHECK_THROWS_AS(
      (void)null_plane_data_from_json(
          R"({"m0_dim":1,"f1":"1","f2":"0","g0":[["1"]],"domain":[[0,1]]})"),
      std::exception);
  // expressions are parsed against the documented variables
  CHECK_THROWS_AS((void)null_plane_data_from_json(
                      R"({"m0_dim":1,"f1":"t","f2":"0","g0":[["1"]]})"),
                  std::exception);
  CHECK_THROWS_AS((void)null_plane_data_from_json("not json"), std::exception);
}

TEST_CASE("configurations round-trip through files") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "conelab_null_plane_test.json";
  {
    std::ofstream out(path);
    out << builtin_null_plane_config("coupled");
  }
  NullPlaneData data = null_plane_data_from_file(path.string());
  CHECK(data.label == "null_plane_coupled");
  CHECK(data.m0_dim == 1);
  EtaField eta = solve_eta(data);
  CHECK(eta_system_residual(data, eta, 8) < 1e-11);
  fs::remove(path);
  CHECK_THROWS_AS((void)null_plane_data_from_file("/no/such/file.json"),
                  std::exception);
}

TEST_CASE("custom domains override the default box") {
  const char* doc = R"({"m0_dim":1,"f1":"1","f2":"0","g0":[["1"]],
                        "domain":[[-0.5,0.5],[-0.5,0.5],[-0.25,0.25],[0.5,1.5]]})";
  NullPlaneData data = null_plane_data_from_json(doc);
  MetricChart chart = build_metric(data, solve_eta(data));
  CHECK(chart.domain[2].first == -0.25);
  CHECK(chart.domain[3].second == 1.5);
  CHECK_FALSE(chart.in_domain(pt({0.6, 0.0, 0.0, 1.0})));
}

}  // TEST_SUITE
