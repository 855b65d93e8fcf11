#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "egl/constants.hpp"

namespace egl {

enum class InitialKind { omega0, eigenfunction };

/// Flat run configuration. Every field has a key of the same name in the
/// config file; see `config_keys()`.
struct RunConfig {
  int n = 256;
  Mode mode = Mode::resolvable;
  double A = 2.0;
  double C3 = 1.0;
  double C2 = 1.0;  // guess for the velocity-gradient growth constant
  double T = 1.0;   // horizon for choose_s
  double delta = 0.1;
  double delta1 = 0.05;
  double s = 0.02;
  InitialKind initial = InitialKind::omega0;
  double cfl = 0.5;
  double t_end = 1.0;
  double snapshot_interval = 0.1;
  double max_dt = 0.01;
  double blowup_factor = 100.0;
  double checkpoint_interval = 0.0;  // 0: final checkpoint only
  bool dealias = true;
  bool filter = false;
  bool force = false;
  bool acknowledge_unresolved = false;
  unsigned precision = 50;
  std::uint64_t seed = 0;
  std::string output = "egl_out";

  /// Keys assigned explicitly, from the file or the command line.
  std::set<std::string> assigned;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::set<std::string>& config_keys();

/// Parse `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines throw ConfigError naming the line.
std::map<std::string, std::string> parse_config_text(const std::string& text);

void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings);
RunConfig load_config(const std::string& path);

/// Mode-specific invariants. Theoretical mode rejects simulation keys;
/// resolvable mode requires delta >= 8h and s >= 2h unless
/// acknowledge_unresolved is set.
void validate_for_simulation(const RunConfig& config);
void validate_for_constants(const RunConfig& config);

}  // namespace egl
