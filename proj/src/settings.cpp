#include "conelab/settings.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace conelab {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("settings: bad value for " + what + ": '" +
                                text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("settings: bad value for " + what + ": '" +
                                text + "'");
  return v;
}

long long parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("settings: bad value for " + what + ": '" +
                                text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("settings: bad value for " + what + ": '" +
                                text + "'");
  return v;
}

void validate(const Settings& s) {
  if (s.format != "json" && s.format != "csv")
    throw std::invalid_argument("settings: format must be json or csv, got '" +
                                s.format + "'");
  if (s.jet_order < 2 || s.jet_order > 12)
    throw std::invalid_argument("settings: jet_order out of range [2, 12]");
  if (s.grid < 1 || s.grid > 4096)
    throw std::invalid_argument("settings: grid out of range [1, 4096]");
  if (!(s.tol > 0))
    throw std::invalid_argument("settings: tol must be positive");
}

void apply_config_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("settings: cannot open config file '" + path +
                                "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::invalid_argument("settings: config file '" + path +
                                "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("settings: config file '" + path +
                                "' must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "tol")
      s.tol = value.get<double>();
    else if (key == "jet_order")
      s.jet_order = value.get<int>();
    else if (key == "grid")
      s.grid = value.get<int>();
    else if (key == "seed")
      s.seed = value.get<std::uint64_t>();
    else if (key == "format")
      s.format = value.get<std::string>();
    else if (key == "out")
      s.out = value.get<std::string>();
    else
      throw std::invalid_argument("settings: unknown config key '" + key +
                                  "' in '" + path + "'");
  }
}

void apply_environment(Settings& s) {
  if (const char* v = std::getenv("CONELAB_TOL")) s.tol = parse_double(v, "CONELAB_TOL");
  if (const char* v = std::getenv("CONELAB_JET_ORDER"))
    s.jet_order = static_cast<int>(parse_int(v, "CONELAB_JET_ORDER"));
  if (const char* v = std::getenv("CONELAB_GRID"))
    s.grid = static_cast<int>(parse_int(v, "CONELAB_GRID"));
  if (const char* v = std::getenv("CONELAB_SEED"))
    s.seed = static_cast<std::uint64_t>(parse_int(v, "CONELAB_SEED"));
  if (const char* v = std::getenv("CONELAB_FORMAT")) s.format = v;
  if (const char* v = std::getenv("CONELAB_OUT")) s.out = v;
}

}  // namespace

Settings resolve_settings(const SettingsOverrides& flags,
                          const std::string& config_path) {
  Settings s;
  if (!config_path.empty()) apply_config_file(s, config_path);
  apply_environment(s);
  if (flags.tol) s.tol = *flags.tol;
  if (flags.jet_order) s.jet_order = *flags.jet_order;
  if (flags.grid) s.grid = *flags.grid;
  if (flags.seed) s.seed = *flags.seed;
  if (flags.format) s.format = *flags.format;
  if (flags.out) s.out = *flags.out;
  validate(s);
  return s;
}

}  // namespace conelab
