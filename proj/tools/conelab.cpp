#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conelab/cone_constructions.hpp"
#include "conelab/holonomy.hpp"
#include "conelab/null_plane.hpp"
#include "conelab/report.hpp"
#include "conelab/settings.hpp"
#include "conelab/suites.hpp"

#ifndef CONELAB_VERSION
#define CONELAB_VERSION "0.0.0"
#endif

namespace {

using namespace conelab;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

Eigen::VectorXd parse_point(const std::string& text, int dim) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad coordinate '" + item + "' in --point");
    }
    if (used != item.size())
      throw std::invalid_argument("bad coordinate '" + item + "' in --point");
    xs.push_back(v);
  }
  if (static_cast<int>(xs.size()) != dim)
    throw std::invalid_argument("--point has " + std::to_string(xs.size()) +
                                " coordinates, the chart expects " +
                                std::to_string(dim));
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p(i) = xs[i];
  return p;
}

/// Looks for a coordinate direction that is null and parallel at p (all
/// Christoffel symbols with that lower field index vanishing, also at a
/// second probe point) and pairs it with a partner direction into a null
/// frame for the stabiliser read-out.
std::optional<NullFrame> detect_null_frame(const MetricChart& chart,
                                           const Eigen::VectorXd& p) {
  std::vector<Jet> jets = chart.components(p, 0);
  Eigen::MatrixXd g(chart.dim, chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int j = 0; j < chart.dim; ++j) g(i, j) = jets[i * chart.dim + j].value();
  std::vector<Eigen::VectorXd> probes = {p};
  for (const auto& q : sample_grid(chart, 2, 1)) probes.push_back(q);
  for (int k = 0; k < chart.dim; ++k) {
    if (std::abs(g(k, k)) > 1e-9) continue;
    bool parallel = true;
    for (const auto& q : probes) {
      NdArray gamma = christoffel_values(chart, q);
      for (int a = 0; a < chart.dim && parallel; ++a)
        for (int i = 0; i < chart.dim && parallel; ++i)
          if (std::abs(gamma({a, i, k})) > 1e-9) parallel = false;
      if (!parallel) break;
    }
    if (!parallel) continue;
    for (int j = 0; j < chart.dim; ++j) {
      if (j == k || std::abs(g(k, j)) < 1e-8) continue;
      try {
        return frame_from_null_pair(QuadraticSpace::from_metric(g), k, j, 1e-8);
      } catch (const std::exception&) {
      }
    }
  }
  return std::nullopt;
}

int do_verify(const std::string& suite, const Settings& settings) {
  if (!is_suite_name(suite))
    throw std::invalid_argument("unknown suite: " + suite);
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = run_suite(suite, settings);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  std::string primary =
      settings.format == "csv" ? report_csv(rep) : report_json(rep);
  std::cout << primary;
  if (!settings.out.empty()) {
    write_file(settings.out, primary);
    if (settings.format == "json")
      write_file(settings.out + ".csv", report_csv(rep));
  }
  std::fprintf(stderr, "[conelab] suite %s: %zu checks, %d failed, %.2fs\n",
               suite.c_str(), rep.checks.size(), rep.failed_count(), secs);
  return rep.pass() ? 0 : 1;
}

int do_holonomy(const std::string& chart_id, const std::string& point_text,
                int order, const Settings& settings) {
  MetricChart chart = chart_by_id(chart_id);
  Eigen::VectorXd p = parse_point(point_text, chart.dim);
  if (!chart.in_domain(p)) {
    std::cerr << "error: point lies outside the domain of " << chart.label
              << "\n";
    return 1;
  }
  EndoSpan span = ambrose_singer_span(chart, p, order, settings.tol);
  SpanDocument doc;
  doc.chart = chart.label;
  doc.point = p;
  doc.order = span.generation_order;
  doc.dim = span.dim();
  doc.converged = span.converged;
  doc.basis = span.basis;
  if (auto frame = detect_null_frame(chart, p)) {
    StabilizerAnalysis st = stabilizer_analysis(span, *frame);
    doc.has_stabilizer = st.stabilises;
    doc.linear_dim = st.linear_part.dim();
    doc.translation_dim = static_cast<int>(st.translations.vectors.cols());
    doc.invariant_null_line = st.null_line.has_value();
    doc.decomposable = st.decomposable_witness.has_value();
  }
  std::string text = settings.format == "csv"
                         ? span_csv(doc, CONELAB_VERSION)
                         : span_json(doc, CONELAB_VERSION);
  std::cout << text;
  if (!settings.out.empty()) write_file(settings.out, text);
  return 0;
}

int do_build_null_plane(const std::string& config_path,
                        const Settings& settings) {
  NullPlaneData data = null_plane_data_from_file(config_path);
  try {
    EtaField eta = solve_eta(data);
    std::vector<CheckResult> checks;
    checks.push_back(CheckResult::bound(
        "build.system", "first-order system for the 1-form holds",
        eta_system_residual(data, eta, settings.grid), 1e-9));
    MetricChart chart = build_metric(data, eta);
    NormalFormFrame frame = normal_form_frame(data, eta);
    double fund = 0;
    for (const auto& q : sample_grid(chart, 8, settings.seed))
      fund = std::max(fund, fundamental_residuals(chart, frame.V, frame.Z,
                                                  frame.alpha, frame.beta, q)
                                .max());
    checks.push_back(CheckResult::bound(
        "build.fundamental", "structure equations of the frame pair hold",
        fund, 1e-8));
    checks.push_back(CheckResult::bound(
        "build.cone", "cone carries the parallel totally null plane",
        cone_null_plane_check(data, eta, 16).max(), 1e-8));
    ChartSummary summary;
    summary.label = chart.label;
    summary.dim = chart.dim;
    summary.signature = chart.signature;
    summary.coords = chart.coord_names;
    summary.domain = chart.domain;
    std::string text;
    if (settings.format == "csv") {
      SuiteReport rep;
      rep.suite = "build-null-plane";
      rep.version = CONELAB_VERSION;
      rep.config = settings;
      rep.checks = checks;
      text = report_csv(rep);
    } else {
      text = chart_report_json(summary, checks, CONELAB_VERSION);
    }
    std::cout << text;
    if (!settings.out.empty()) write_file(settings.out, text);
    for (const auto& c : checks)
      if (!c.pass) return 1;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for cone metrics, doubled warped products "
               "and their holonomy"};
  app.set_version_flag("--version", CONELAB_VERSION);
  app.require_subcommand(1);

  SettingsOverrides ov;
  std::string settings_path;
  auto add_common = [&](CLI::App* sub, bool with_settings_file) {
    sub->add_option("--tol", ov.tol, "span and convergence tolerance");
    sub->add_option("--jet-order", ov.jet_order, "series truncation order");
    sub->add_option("--grid", ov.grid, "sample grid density");
    sub->add_option("--seed", ov.seed, "sample grid seed");
    sub->add_option("--format", ov.format, "report format (json or csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", ov.out, "write the report to this path");
    if (with_settings_file)
      sub->add_option("--config", settings_path,
                      "JSON settings file (flags and CONELAB_* variables win)");
  };

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "one of: " + [] {
                       std::string s;
                       for (const auto& n : suite_names()) {
                         if (!s.empty()) s += ", ";
                         s += n;
                       }
                       return s;
                     }())
      ->required();
  add_common(verify, true);

  std::string chart_id, point_text;
  int order = 3;
  CLI::App* holonomy =
      app.add_subcommand("holonomy", "holonomy span at a point of a chart");
  holonomy->add_option("--chart", chart_id, "catalog id or chart document path")
      ->required();
  holonomy->add_option("--point", point_text, "comma-separated coordinates")
      ->required();
  holonomy->add_option("--order", order, "curvature derivative order")
      ->check(CLI::Range(1, 6));
  add_common(holonomy, true);

  std::string data_path;
  CLI::App* build = app.add_subcommand(
      "build-null-plane",
      "build a normal-form metric from a configuration and verify it");
  build->add_option("--config", data_path, "null-plane data document")
      ->required();
  add_common(build, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Settings settings = resolve_settings(ov, settings_path);
    if (verify->parsed()) return do_verify(suite, settings);
    if (holonomy->parsed())
      return do_holonomy(chart_id, point_text, order, settings);
    if (build->parsed()) return do_build_null_plane(data_path, settings);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
