#include "wavemap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "wavemap/errors.hpp"

namespace wavemap {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

int to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (const auto caret = text.find('^'); caret != std::string_view::npos)
    return std::pow(to_double(text.substr(0, caret)), to_double(text.substr(caret + 1)));
  if (const auto slash = text.find('/'); slash != std::string_view::npos)
    return to_double(text.substr(0, slash)) / to_double(text.substr(slash + 1));
  return to_double(text);
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  try {
    if (key == "grid") {
      cfg.grid_cells = to_int(value);
    } else if (key == "mode") {
      if (value == "fixed") {
        cfg.mode = RunMode::FixedTau;
      } else if (value == "adaptive") {
        cfg.mode = RunMode::Adaptive;
      } else {
        throw ConfigError("mode must be 'fixed' or 'adaptive'");
      }
    } else if (key == "tau") {
      cfg.tau = parse_number(value);
    } else if (key == "tend") {
      cfg.t_end = parse_number(value);
    } else if (key == "strategy") {
      cfg.controller.strategy = parse_strategy(value);
    } else if (key == "tol0") {
      cfg.controller.tol0 = parse_number(value);
    } else if (key == "grow") {
      cfg.controller.grow = parse_number(value);
    } else if (key == "shrink") {
      cfg.controller.shrink = parse_number(value);
    } else if (key == "safety") {
      cfg.controller.safety = parse_number(value);
    } else if (key == "tau_min") {
      cfg.controller.tau_min = parse_number(value);
    } else if (key == "tau_max") {
      cfg.controller.tau_max = parse_number(value);
    } else if (key == "tau0") {
      cfg.controller.tau0 = parse_number(value);
    } else if (key == "fp_tol") {
      cfg.solver.fp_tol = parse_number(value);
    } else if (key == "fp_max_iter") {
      cfg.solver.fp_max_iter = to_int(value);
    } else if (key == "unit_tol") {
      cfg.solver.unit_tol = parse_number(value);
    } else if (key == "c_q") {
      cfg.solver.c_q = parse_number(value);
    } else if (key == "p_exp") {
      cfg.solver.p_exp = value == "inf" ? INFINITY : parse_number(value);
    } else if (key == "b0") {
      cfg.initial_bound = parse_number(value);
    } else if (key == "data") {
      if (value == "bubble") {
        cfg.data = InitialData::Bubble;
      } else if (value == "constant") {
        cfg.data = InitialData::Constant;
      } else if (value == "rotation") {
        cfg.data = InitialData::Rotation;
      } else {
        throw ConfigError("data must be 'bubble', 'constant' or 'rotation'");
      }
    } else if (key == "out") {
      cfg.output_dir = std::filesystem::path(std::string(value));
    } else if (key == "snapshots") {
      cfg.snapshot_times.clear();
      if (value == "default") {
        cfg.default_snapshots = true;
      } else {
        cfg.default_snapshots = false;
        if (value != "none") {
          std::string_view rest = value;
          while (!rest.empty()) {
            const auto comma = rest.find(',');
            cfg.snapshot_times.push_back(parse_number(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
          }
        }
      }
    } else if (key == "store_dt") {
      cfg.store_dt = parse_number(value);
    } else if (key == "dump_residuals") {
      cfg.dump_residuals = to_bool(value);
    } else {
      throw ConfigError("unknown setting '" + std::string(key) + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void parse_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    try {
      apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  parse_config(in, base);
  return base;
}

void RunConfig::validate() const {
  try {
    Grid2D{grid_cells};
    solver.validate();
    if (mode == RunMode::Adaptive) controller.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(t_end > 0.0)) throw ConfigError("tend must be positive");
  if (mode == RunMode::FixedTau && !(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(initial_bound >= 0.0)) throw ConfigError("b0 must be non-negative");
  for (double s : snapshot_times)
    if (s < 0.0 || s > t_end) throw ConfigError("snapshot times must lie in [0, tend]");
}

std::vector<double> RunConfig::resolved_snapshot_times() const {
  if (!default_snapshots) {
    std::vector<double> out = snapshot_times;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<double> out;
  for (int k = 0; k < 8; ++k) out.push_back(t_end * k / 7.0);
  return out;
}

}  // namespace wavemap
