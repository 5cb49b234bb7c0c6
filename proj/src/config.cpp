#include "mdg/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "mdg/basis.hpp"
#include "mdg/dg_operator.hpp"
#include "mdg/problem.hpp"
#include "mdg/schemes.hpp"

namespace mdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v, int line) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v, int line) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || !std::isfinite(out)) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

}  // namespace

double RunConfig::penalty() const { return eta ? *eta : default_penalty(degree); }

LinearSolverSettings RunConfig::solver_settings() const {
  LinearSolverSettings s;
  s.kind = solver;
  s.gmres = gmres;
  s.ilu_level = ilu_level;
  s.direct_fallback_limit = fallback_limit;
  return s;
}

void validate(const RunConfig& cfg) {
  if (cfg.levels < 1) throw ConfigError("levels must be at least 1");
  if (!(cfg.dt0 > 0.0)) throw ConfigError("dt0 must be positive");
  if (!method_by_name(cfg.method)) throw ConfigError("unknown method '" + cfg.method + "'");
  const auto problem = problem_by_name(cfg.problem);
  if (!problem) throw ConfigError("unknown problem '" + cfg.problem + "'");
  if (cfg.degree < 0 || cfg.degree > kMaxBasisDegree) {
    throw ConfigError("degree must lie in [0, " + std::to_string(kMaxBasisDegree) + "]");
  }
  if (cfg.degree == 0 && problem->diffusion > 0.0) {
    throw ConfigError("degree 0 is not meaningful for a diffusive problem");
  }
  if (cfg.level < 0) throw ConfigError("level must be non-negative");
  if (cfg.eta && !(*cfg.eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(cfg.gmres.rtol > 0.0) || cfg.gmres.rtol >= 1.0) throw ConfigError("rtol must lie in (0, 1)");
  if (cfg.gmres.restart < 1) throw ConfigError("restart must be at least 1");
  if (cfg.gmres.max_iterations < 1) throw ConfigError("maxit must be at least 1");
  if (cfg.ilu_level < 0 || cfg.ilu_level > 200) throw ConfigError("ilu_level must lie in [0, 200]");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    }
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");

    if (key == "problem") {
      cfg.problem = value;
    } else if (key == "degree") {
      cfg.degree = to_int(key, value, line);
    } else if (key == "method") {
      cfg.method = value;
    } else if (key == "dt0") {
      cfg.dt0 = to_double(key, value, line);
    } else if (key == "levels") {
      cfg.levels = to_int(key, value, line);
    } else if (key == "level") {
      cfg.level = to_int(key, value, line);
    } else if (key == "eta") {
      cfg.eta = to_double(key, value, line);
    } else if (key == "solver") {
      if (value == "gmres") {
        cfg.solver = SolverKind::gmres;
      } else if (value == "direct") {
        cfg.solver = SolverKind::direct;
      } else {
        throw ConfigError("line " + std::to_string(line) + ": solver must be 'gmres' or 'direct'");
      }
    } else if (key == "rtol") {
      cfg.gmres.rtol = to_double(key, value, line);
    } else if (key == "restart") {
      cfg.gmres.restart = to_int(key, value, line);
    } else if (key == "maxit") {
      cfg.gmres.max_iterations = to_int(key, value, line);
    } else if (key == "ilu_level") {
      cfg.ilu_level = to_int(key, value, line);
    } else if (key == "fallback_limit") {
      const int v = to_int(key, value, line);
      if (v < 0) throw ConfigError("line " + std::to_string(line) + ": fallback_limit must be non-negative");
      cfg.fallback_limit = static_cast<std::size_t>(v);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace mdg
