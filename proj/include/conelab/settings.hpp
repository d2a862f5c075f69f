#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace conelab {

/// Runtime configuration shared by the command-line tools. `tol` is the
/// generic span/convergence tolerance; check-specific thresholds are
/// pinned in the checks themselves and are not affected by it.
struct Settings {
  double tol = 1e-8;
  int jet_order = 6;
  int grid = 32;
  std::uint64_t seed = 0;
  std::string format = "json";  // "json" or "csv"
  std::string out;              // report file; empty writes stdout only
};

/// Values captured from command-line flags; a disengaged field means the
/// flag was not given.
struct SettingsOverrides {
  std::optional<double> tol;
  std::optional<int> jet_order;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

/// Layered resolution: built-in defaults, then the JSON config file (if
/// `config_path` is nonempty), then CONELAB_* environment variables, then
/// explicit flags. Later layers win. Unknown config keys, malformed
/// numbers and formats other than json/csv raise invalid_argument.
Settings resolve_settings(const SettingsOverrides& flags,
                          const std::string& config_path = "");

}  // namespace conelab
