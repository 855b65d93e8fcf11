#include "egl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "egl/grid.hpp"

namespace egl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

}  // namespace

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "n",      "mode",   "A",    "C3",        "C2",        "T",
      "delta",  "delta1", "s",    "initial",   "cfl",       "t_end",
      "snapshot_interval", "max_dt", "blowup_factor", "checkpoint_interval",
      "dealias", "filter", "force", "acknowledge_unresolved", "precision", "seed",
      "output"};
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!config_keys().count(key)) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(number) + ": empty value for '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "n") {
    c.n = static_cast<int>(to_int(key, v));
  } else if (key == "mode") {
    if (v == "theoretical") {
      c.mode = Mode::theoretical;
    } else if (v == "resolvable") {
      c.mode = Mode::resolvable;
    } else {
      throw ConfigError("mode: expected theoretical or resolvable, got '" + v + "'");
    }
  } else if (key == "A") {
    c.A = to_double(key, v);
  } else if (key == "C3") {
    c.C3 = to_double(key, v);
  } else if (key == "C2") {
    c.C2 = to_double(key, v);
  } else if (key == "T") {
    c.T = to_double(key, v);
  } else if (key == "delta") {
    c.delta = to_double(key, v);
  } else if (key == "delta1") {
    c.delta1 = to_double(key, v);
  } else if (key == "s") {
    c.s = to_double(key, v);
  } else if (key == "initial") {
    if (v == "omega0") {
      c.initial = InitialKind::omega0;
    } else if (v == "eigenfunction") {
      c.initial = InitialKind::eigenfunction;
    } else {
      throw ConfigError("initial: expected omega0 or eigenfunction, got '" + v + "'");
    }
  } else if (key == "cfl") {
    c.cfl = to_double(key, v);
  } else if (key == "t_end") {
    c.t_end = to_double(key, v);
  } else if (key == "snapshot_interval") {
    c.snapshot_interval = to_double(key, v);
  } else if (key == "max_dt") {
    c.max_dt = to_double(key, v);
  } else if (key == "blowup_factor") {
    c.blowup_factor = to_double(key, v);
  } else if (key == "checkpoint_interval") {
    c.checkpoint_interval = to_double(key, v);
  } else if (key == "dealias") {
    c.dealias = to_bool(key, v);
  } else if (key == "filter") {
    c.filter = to_bool(key, v);
  } else if (key == "force") {
    c.force = to_bool(key, v);
  } else if (key == "acknowledge_unresolved") {
    c.acknowledge_unresolved = to_bool(key, v);
  } else if (key == "precision") {
    const long long p = to_int(key, v);
    if (p < 1) throw ConfigError("precision must be positive");
    c.precision = static_cast<unsigned>(p);
  } else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "output") {
    c.output = v;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
  c.assigned.insert(key);
}

void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings) {
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig c;
  apply_settings(c, parse_config_text(text.str()));
  return c;
}

void validate_for_constants(const RunConfig& c) {
  if (c.A < 2.0) throw ConfigError("A must be >= 2");
  if (!(c.C3 > 0.0)) throw ConfigError("C3 must be > 0");
  if (!(c.C2 > 0.0)) throw ConfigError("C2 must be > 0");
  if (!(c.T > 0.0)) throw ConfigError("T must be > 0");
  if (c.mode == Mode::theoretical) {
    for (const char* key : {"n", "t_end", "cfl", "snapshot_interval", "initial"}) {
      if (c.assigned.count(key)) {
        throw ConfigError(std::string("theoretical mode is constants-only; '") + key +
                          "' is a simulation setting");
      }
    }
    if (c.precision < 50) throw ConfigError("theoretical mode needs precision >= 50 digits");
  }
}

void validate_for_simulation(const RunConfig& c) {
  if (c.mode == Mode::theoretical) {
    throw ConfigError("theoretical-mode parameters cannot be simulated; use mode = resolvable");
  }
  try {
    make_grid(c.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double h = 2.0 / c.n;
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (!(c.snapshot_interval > 0.0)) throw ConfigError("snapshot_interval must be > 0");
  if (!(c.max_dt > 0.0)) throw ConfigError("max_dt must be > 0");
  if (c.t_end < 0.0) throw ConfigError("t_end must be >= 0");
  if (c.checkpoint_interval < 0.0) throw ConfigError("checkpoint_interval must be >= 0");
  if (!(c.s > 0.0 && c.s < 0.5)) throw ConfigError("s must lie in (0, 1/2)");
  if (c.initial == InitialKind::omega0) {
    if (!(c.delta > 0.0 && c.delta < 0.25)) throw ConfigError("delta must lie in (0, 1/4)");
    if (!(c.delta1 > 0.0 && c.delta1 <= 0.25)) throw ConfigError("delta1 must lie in (0, 1/4]");
    if (c.s > c.delta1 / 2.0) throw ConfigError("s must not exceed delta1/2");
    if (c.delta < 8.0 * h) {
      std::ostringstream msg;
      msg << "delta = " << c.delta << " is below 8h = " << 8.0 * h << " for n = " << c.n;
      throw ConfigError(msg.str());
    }
  }
  if (c.s < 2.0 * h && !c.acknowledge_unresolved) {
    std::ostringstream msg;
    msg << "s = " << c.s << " is below 2h = " << 2.0 * h
        << "; set acknowledge_unresolved = true to run anyway";
    throw ConfigError(msg.str());
  }
}

}  // namespace egl
