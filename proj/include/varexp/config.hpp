#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "varexp/energy.hpp"
#include "varexp/exponent_field.hpp"
#include "varexp/grid.hpp"
#include "varexp/operators.hpp"
#include "varexp/solver.hpp"

namespace varexp {

/// Flat `key = value` configuration with dotted section keys. `#` starts a
/// comment; lists are space- or comma-separated.
class RunConfig {
public:
  static RunConfig parse_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
      cfg.entries_[key] = value;
    }
    return cfg;
  }

  static RunConfig parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str());
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    touched_.insert(it->first);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_real(const std::string& key) const { return to_real(key, get_string(key)); }
  double get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
  }

  long get_int(const std::string& key) const {
    const double v = get_real(key);
    const long r = long(v);
    if (double(r) != v) throw std::invalid_argument("config: key '" + key + "' must be an integer");
    return r;
  }
  long get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::vector<double> get_reals(const std::string& key) const {
    std::string s = get_string(key);
    for (auto& ch : s)
      if (ch == ',') ch = ' ';
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_real(key, tok));
    if (out.empty()) throw std::invalid_argument("config: key '" + key + "' has no values");
    return out;
  }

  std::vector<long> get_ints(const std::string& key) const {
    std::vector<long> out;
    for (double v : get_reals(key)) {
      const long r = long(v);
      if (double(r) != v)
        throw std::invalid_argument("config: key '" + key + "' must hold integers");
      out.push_back(r);
    }
    return out;
  }

  /// Keys never read by the run; used to reject typos up front.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
      if (!touched_.count(k)) out.push_back(k);
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return entries_; }

private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static double to_real(const std::string& key, const std::string& tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + tok + "'");
    }
  }

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> touched_;
};

/// Everything a run needs, materialized from a RunConfig.
struct RunSetup {
  std::shared_ptr<const Grid> grid;
  ExponentField exponent;
  OperatorModel op;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> lambda;
  std::vector<double> lambda_grid;
  SolveOptions options;
  std::string output_dir = "out";
};

inline Vec3 to_vec3(const std::vector<double>& v) {
  Vec3 out{0, 0, 0};
  for (std::size_t k = 0; k < v.size() && k < 3; ++k) out[k] = v[k];
  return out;
}

inline RunSetup build_run_setup(const RunConfig& cfg) {
  RunSetup setup;

  const int dim = int(cfg.get_int("grid.dim"));
  const std::vector<long> shape = cfg.get_ints("grid.shape");
  std::vector<double> extents(std::size_t(std::max(dim, 0)), 1.0);
  if (cfg.has("grid.extents")) extents = cfg.get_reals("grid.extents");
  setup.grid = build_grid(dim, shape, extents);

  const std::string family = cfg.get_string("exponent.family", "constant");
  if (family == "constant") {
    setup.exponent = exponent_constant(*setup.grid, cfg.get_real("exponent.value"));
  } else if (family == "affine") {
    setup.exponent = exponent_affine(*setup.grid, to_vec3(cfg.get_reals("exponent.direction")),
                                     cfg.get_real("exponent.lo"), cfg.get_real("exponent.hi"));
  } else if (family == "radial") {
    setup.exponent = exponent_radial(*setup.grid, to_vec3(cfg.get_reals("exponent.center")),
                                     cfg.get_real("exponent.lo"), cfg.get_real("exponent.hi"));
  } else if (family == "tabulated") {
    const std::string path = cfg.get_string("exponent.file");
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open exponent file " + path);
    std::vector<double> vals;
    double v;
    while (f >> v) vals.push_back(v);
    setup.exponent = exponent_tabulated(*setup.grid, vals);
  } else {
    throw std::invalid_argument("config: unknown exponent.family '" + family + "'");
  }

  const std::string op = cfg.get_string("operator", "plaplace");
  if (op == "plaplace")
    setup.op = plaplace_model(setup.exponent);
  else if (op == "mean_curvature")
    setup.op = mean_curvature_model(setup.exponent);
  else
    throw std::invalid_argument("config: unknown operator '" + op + "'");

  setup.beta = cfg.get_real("problem.beta");
  setup.gamma = cfg.get_real("problem.gamma");
  if (cfg.has("problem.lambda")) setup.lambda = cfg.get_real("problem.lambda");
  if (cfg.has("problem.lambda_grid")) setup.lambda_grid = cfg.get_reals("problem.lambda_grid");

  SolveOptions& o = setup.options;
  o.tol = cfg.get_real("solver.tol", default_tolerance(dim));
  o.max_iter = cfg.get_int("solver.max_iter", 200000);
  o.path_nodes = int(cfg.get_int("solver.path_nodes", 16));
  o.seed = std::uint64_t(cfg.get_int("solver.seed", 12345));
  o.plateau_t0 = cfg.get_real("solver.t0", 0.0);
  o.plateau_margin = cfg.get_real("solver.margin", 0.25);
  o.hypothesis_samples = cfg.get_int("solver.hypothesis_samples", 5000);

  setup.output_dir = cfg.get_string("output.dir", "out");

  const auto unused = cfg.unused_keys();
  if (!unused.empty())
    throw std::invalid_argument("config: unknown key '" + unused.front() + "'");
  return setup;
}

inline ProblemParams setup_params(const RunSetup& setup, double lambda) {
  return make_problem_params(lambda, setup.beta, setup.gamma, setup.op, setup.exponent,
                             setup.grid->dim);
}

}  // namespace varexp
