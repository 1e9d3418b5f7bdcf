#include "lcamr/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lcamr {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  if (line <= 0) throw std::runtime_error("config: " + msg);
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(line, key + ": expected a number, got '" + v + "'");
  }
}

int64_t parse_int(const std::string& v, int line, const std::string& key) {
  try {
    size_t used = 0;
    const int64_t x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(line, key + ": expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, key + ": expected true or false, got '" + v + "'");
}

const std::array<const char*, 8> kMaterialKeys = {
    "K1", "K2", "K3", "eps0", "eps_perp", "eps_a", "e_s", "e_b"};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool nu_given = false, zeta_given = false, marking_given = false;
  int nu_line = 0, zeta_line = 0, marking_line = 0;

  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    std::string s = raw_line;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "run" && section != "material")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, key + ": empty value");

    if (section == "material") {
      bool known = false;
      for (const char* k : kMaterialKeys)
        if (key == k) known = true;
      if (!known) fail(line, "unknown material parameter '" + key + "'");
      cfg.material[key] = parse_double(value, line, key);
      continue;
    }

    if (key == "problem") {
      if (value != "elastic_benchmark" && value != "flexo")
        fail(line, "problem must be elastic_benchmark or flexo");
      cfg.problem = value;
    } else if (key == "formulation") {
      if (value == "penalty") cfg.formulation = Formulation::penalty;
      else if (value == "lagrangian") cfg.formulation = Formulation::lagrangian;
      else fail(line, "formulation must be penalty or lagrangian");
    } else if (key == "refinement") {
      if (value == "uniform") cfg.uniform = true;
      else if (value == "amr") cfg.uniform = false;
      else fail(line, "refinement must be uniform or amr");
    } else if (key == "marking") {
      try {
        cfg.marking = parse_marking(value);
      } catch (const std::exception& ex) {
        fail(line, ex.what());
      }
      marking_given = true;
      marking_line = line;
    } else if (key == "nu") {
      cfg.nu = parse_double(value, line, key);
      if (!(cfg.nu > 0.0 && cfg.nu < 1.0))
        fail(line, "nu must lie strictly between 0 and 1");
      nu_given = true;
      nu_line = line;
    } else if (key == "nx") {
      cfg.nx = static_cast<int>(parse_int(value, line, key));
      if (cfg.nx < 1) fail(line, "nx must be positive");
    } else if (key == "ny") {
      cfg.ny = static_cast<int>(parse_int(value, line, key));
      if (cfg.ny < 1) fail(line, "ny must be positive");
    } else if (key == "levels") {
      cfg.levels = static_cast<int>(parse_int(value, line, key));
      if (cfg.levels < 1) fail(line, "levels must be at least 1");
    } else if (key == "zeta") {
      cfg.zeta = parse_double(value, line, key);
      if (cfg.zeta <= 0.0) fail(line, "zeta must be positive");
      zeta_given = true;
      zeta_line = line;
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "emit_vtk") {
      cfg.emit_vtk = parse_bool(value, line, key);
    } else if (key == "dump_systems") {
      cfg.dump_systems = parse_bool(value, line, key);
    } else if (key == "quad_points") {
      cfg.quad_points = static_cast<int>(parse_int(value, line, key));
      if (cfg.quad_points < 1 || cfg.quad_points > 6)
        fail(line, "quad_points must lie in [1, 6]");
    } else if (key == "tol") {
      cfg.tol = parse_double(value, line, key);
      if (cfg.tol <= 0.0) fail(line, "tol must be positive");
    } else if (key == "max_newton") {
      cfg.max_newton = static_cast<int>(parse_int(value, line, key));
      if (cfg.max_newton < 1) fail(line, "max_newton must be positive");
    } else if (key == "count_only") {
      cfg.count_only = parse_bool(value, line, key);
    } else if (key == "max_dofs") {
      cfg.max_dofs = parse_int(value, line, key);
      if (cfg.max_dofs < 0) fail(line, "max_dofs must be nonnegative");
    } else if (key == "initial_guess") {
      if (value != "uniform" && value != "analytic")
        fail(line, "initial_guess must be uniform or analytic");
      cfg.initial_guess = value;
    } else if (key == "initial_director") {
      std::istringstream parts(value);
      std::string tok;
      int i = 0;
      while (std::getline(parts, tok, ',')) {
        if (i >= 3) fail(line, "initial_director takes three components");
        cfg.initial_director[i++] = parse_double(trim(tok), line, key);
      }
      if (i != 3) fail(line, "initial_director takes three components");
      const double norm = std::hypot(cfg.initial_director[0],
                                     cfg.initial_director[1],
                                     cfg.initial_director[2]);
      if (norm == 0.0) fail(line, "initial_director must be nonzero");
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  // Cross-field constraints.
  if (cfg.uniform) {
    if (nu_given) fail(nu_line, "nu applies to amr runs only");
    if (marking_given) fail(marking_line, "marking applies to amr runs only");
  }
  if (cfg.formulation == Formulation::lagrangian && zeta_given)
    fail(zeta_line, "zeta applies to the penalty formulation only");
  if (cfg.count_only && !cfg.uniform)
    fail(0, "count_only requires refinement = uniform");
  if (cfg.initial_guess == "analytic" && cfg.problem != "elastic_benchmark")
    fail(0, "initial_guess = analytic needs the elastic benchmark");

  // Preset defaults. initial_guess stays empty unless given; the problem
  // preset then supplies the start state.
  if (cfg.zeta < 0.0)
    cfg.zeta = cfg.problem == "elastic_benchmark" ? 1e8 : 1e5;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const std::exception& ex) {
    throw std::runtime_error(path + ": " + ex.what());
  }
}

Problem make_problem(const RunConfig& cfg) {
  Problem p =
      cfg.problem == "elastic_benchmark"
          ? elastic_benchmark_problem(cfg.formulation, cfg.zeta,
                                      cfg.initial_guess != "uniform")
          : flexo_problem(cfg.formulation, cfg.zeta);
  for (const auto& [key, value] : cfg.material) {
    if (key == "K1") p.params.K1 = value;
    else if (key == "K2") p.params.K2 = value;
    else if (key == "K3") p.params.K3 = value;
    else if (key == "eps0") p.params.eps0 = value;
    else if (key == "eps_perp") p.params.eps_perp = value;
    else if (key == "eps_a") p.params.eps_a = value;
    else if (key == "e_s") p.params.e_s = value;
    else if (key == "e_b") p.params.e_b = value;
  }
  if (cfg.initial_guess == "uniform") {
    const double norm = std::hypot(cfg.initial_director[0],
                                   cfg.initial_director[1],
                                   cfg.initial_director[2]);
    const std::array<double, 3> dir{cfg.initial_director[0] / norm,
                                    cfg.initial_director[1] / norm,
                                    cfg.initial_director[2] / norm};
    p.initial_director = [dir](double, double) { return dir; };
  }
  return p;
}

NIOptions make_ni_options(const RunConfig& cfg) {
  NIOptions opt;
  opt.nx = cfg.nx;
  opt.ny = cfg.ny;
  opt.levels = cfg.levels;
  opt.uniform = cfg.uniform;
  opt.marking = cfg.marking;
  opt.nu = cfg.nu;
  opt.tol = cfg.tol;
  opt.max_iters = cfg.max_newton;
  opt.quad_points = cfg.quad_points;
  opt.count_only = cfg.count_only;
  opt.max_raw_dofs = cfg.max_dofs;
  return opt;
}

}  // namespace lcamr
