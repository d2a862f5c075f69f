#include "conelab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace conelab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

ordered_json settings_json(const Settings& s) {
  ordered_json j;
  j["tol"] = format_value(s.tol);
  j["jet_order"] = s.jet_order;
  j["grid"] = s.grid;
  j["seed"] = s.seed;
  j["format"] = s.format;
  j["out"] = s.out;
  return j;
}

void write_if_requested(const std::string& text, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot open '" + path + "'");
  out << text;
}

}  // namespace

std::string to_string(CheckMode mode) {
  switch (mode) {
    case CheckMode::kUpperBound: return "max";
    case CheckMode::kLowerBound: return "min";
    case CheckMode::kEquals: return "eq";
  }
  return "?";
}

CheckResult CheckResult::bound(std::string id, std::string label, double value,
                               double threshold) {
  CheckResult r{std::move(id), std::move(label), value, threshold,
                CheckMode::kUpperBound, false};
  r.pass = std::isfinite(value) && value <= threshold;
  return r;
}

CheckResult CheckResult::at_least(std::string id, std::string label,
                                  double value, double threshold) {
  CheckResult r{std::move(id), std::move(label), value, threshold,
                CheckMode::kLowerBound, false};
  r.pass = std::isfinite(value) && value >= threshold;
  return r;
}

CheckResult CheckResult::equals(std::string id, std::string label, double value,
                                double expected) {
  CheckResult r{std::move(id), std::move(label), value, expected,
                CheckMode::kEquals, false};
  r.pass = value == expected;
  return r;
}

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

int SuiteReport::failed_count() const {
  int n = 0;
  for (const auto& c : checks)
    if (!c.pass) ++n;
  return n;
}

std::string format_value(double v) {
  if (v == 0) return "0";  // merge the signed zeros
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string report_json(const SuiteReport& report) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = "conelab";
  doc["version"] = report.version;
  doc["suite"] = report.suite;
  doc["config"] = settings_json(report.config);
  doc["pass"] = report.pass();
  doc["checks"] = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["label"] = c.label;
    jc["value"] = format_value(c.value);
    jc["threshold"] = format_value(c.threshold);
    jc["mode"] = to_string(c.mode);
    jc["pass"] = c.pass;
    doc["checks"].push_back(jc);
  }
  return doc.dump(2) + "\n";
}

std::string report_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "suite,id,label,value,threshold,mode,pass\n";
  for (const auto& c : report.checks) {
    out << report.suite << ',' << c.id << ',' << csv_quote(c.label) << ','
        << format_value(c.value) << ',' << format_value(c.threshold) << ','
        << to_string(c.mode) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string render_report(const SuiteReport& report) {
  std::string text = report.config.format == "csv" ? report_csv(report)
                                                   : report_json(report);
  write_if_requested(text, report.config.out);
  return text;
}

std::string span_json(const SpanDocument& doc, const std::string& version) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool"] = "conelab";
  j["version"] = version;
  j["chart"] = doc.chart;
  j["point"] = ordered_json::array();
  for (int i = 0; i < doc.point.size(); ++i)
    j["point"].push_back(format_value(doc.point(i)));
  j["order"] = doc.order;
  j["dim"] = doc.dim;
  j["converged"] = doc.converged;
  j["basis"] = ordered_json::array();
  for (const auto& m : doc.basis) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(format_value(m(r, c)));
      rows.push_back(row);
    }
    j["basis"].push_back(rows);
  }
  if (doc.has_stabilizer) {
    ordered_json s;
    s["linear_dim"] = doc.linear_dim;
    s["translation_dim"] = doc.translation_dim;
    s["invariant_null_line"] = doc.invariant_null_line;
    s["decomposable"] = doc.decomposable;
    j["stabilizer"] = s;
  }
  return j.dump(2) + "\n";
}

std::string chart_report_json(const ChartSummary& chart,
                              const std::vector<CheckResult>& checks,
                              const std::string& version) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = "conelab";
  doc["version"] = version;
  ordered_json jc;
  jc["label"] = chart.label;
  jc["dim"] = chart.dim;
  jc["signature"] = {{"timelike", chart.signature.t},
                     {"spacelike", chart.signature.s}};
  jc["coordinates"] = chart.coords;
  jc["domain"] = ordered_json::array();
  for (const auto& [lo, hi] : chart.domain)
    jc["domain"].push_back({format_value(lo), format_value(hi)});
  doc["chart"] = jc;
  bool all = true;
  doc["checks"] = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["id"] = c.id;
    e["label"] = c.label;
    e["value"] = format_value(c.value);
    e["threshold"] = format_value(c.threshold);
    e["mode"] = to_string(c.mode);
    e["pass"] = c.pass;
    doc["checks"].push_back(e);
    all = all && c.pass;
  }
  doc["pass"] = all;
  return doc.dump(2) + "\n";
}

std::string span_csv(const SpanDocument& doc, const std::string& version) {
  std::ostringstream out;
  out << "tool,version,chart,point,order,dim,converged,linear_dim,"
         "translation_dim\n";
  std::string point;
  for (int i = 0; i < doc.point.size(); ++i) {
    if (i) point += ';';
    point += format_value(doc.point(i));
  }
  out << "conelab," << version << ',' << csv_quote(doc.chart) << ','
      << csv_quote(point) << ',' << doc.order << ',' << doc.dim << ','
      << (doc.converged ? "true" : "false") << ',';
  if (doc.has_stabilizer)
    out << doc.linear_dim << ',' << doc.translation_dim << '\n';
  else
    out << ",\n";
  return out.str();
}

}  // namespace conelab
