#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conelab/pseudo_linear.hpp"
#include "conelab/settings.hpp"

namespace conelab {

/// How a check's value is compared against its threshold.
enum class CheckMode {
  kUpperBound,  // pass iff value <= threshold
  kLowerBound,  // pass iff value >= threshold
  kEquals,      // pass iff value == threshold exactly (integer-valued checks)
};

std::string to_string(CheckMode mode);

struct CheckResult {
  std::string id;     // stable sort key, dotted path
  std::string label;  // human-readable description
  double value = 0;
  double threshold = 0;
  CheckMode mode = CheckMode::kUpperBound;
  bool pass = false;

  static CheckResult bound(std::string id, std::string label, double value,
                           double threshold);
  static CheckResult at_least(std::string id, std::string label, double value,
                              double threshold);
  static CheckResult equals(std::string id, std::string label, double value,
                            double expected);
};

/// Outcome of one verification suite. Reports with identical settings and
/// tool version serialize to identical bytes, so wall-clock timing lives
/// outside the document (the CLI prints it to stderr).
struct SuiteReport {
  std::string suite;
  std::string version;
  Settings config;
  std::vector<CheckResult> checks;  // sorted by id

  bool pass() const;
  int failed_count() const;
};

/// schema_version 1; field layout documented in docs/reports.md.
std::string report_json(const SuiteReport& report);
std::string report_csv(const SuiteReport& report);

/// Serializes in the format requested by the settings, writes to
/// `config.out` when nonempty, and returns the document text.
std::string render_report(const SuiteReport& report);

/// Deterministic decimal rendering used by both serializers ("%.12g",
/// integral values without exponent noise).
std::string format_value(double v);

/// Holonomy span description for one chart/point: dimension, convergence
/// flags and the basis matrices row-major. `stab` carries the invariant
/// split when the chart has a distinguished parallel null direction.
struct SpanDocument {
  std::string chart;
  Eigen::VectorXd point;
  int order = 0;
  int dim = 0;
  bool converged = false;
  std::vector<Eigen::MatrixXd> basis;
  bool has_stabilizer = false;
  int linear_dim = 0;
  int translation_dim = 0;
  bool invariant_null_line = false;
  bool decomposable = false;
};

std::string span_json(const SpanDocument& doc, const std::string& version);
std::string span_csv(const SpanDocument& doc, const std::string& version);

/// Chart header for the null-plane builder document.
struct ChartSummary {
  std::string label;
  int dim = 0;
  Signature signature;
  std::vector<std::string> coords;
  std::vector<std::pair<double, double>> domain;
};

/// Built-chart document: chart definition followed by the residual checks.
std::string chart_report_json(const ChartSummary& chart,
                              const std::vector<CheckResult>& checks,
                              const std::string& version);

}  // namespace conelab
