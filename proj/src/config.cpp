#include "blowup/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_literal(const std::string& tok, const std::string& where) {
  const char* cs = tok.c_str();
  char* end = nullptr;
  double val = std::strtod(cs, &end);
  if (end != cs + tok.size() || tok.empty() || !std::isfinite(val))
    fail(Errc::config_error,
         where + ": expected a decimal literal, got '" + tok + "'");
  return val;
}

double require_integral(double v, const std::string& where) {
  if (v != std::floor(v) || v < 0)
    fail(Errc::config_error, where + ": expected a non-negative integer");
  return v;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = name + ":" + std::to_string(lineno);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::config_error, where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      fail(Errc::config_error, where + ": expected 'key = value'");
    if (!seen.insert(key).second)
      fail(Errc::config_error, where + ": duplicate key '" + key + "'");

    if (key == "sweep_v0") {
      std::istringstream vs(val);
      std::string tok;
      cfg.sweep_v0.clear();
      while (vs >> tok) cfg.sweep_v0.push_back(parse_literal(tok, where));
      if (cfg.sweep_v0.empty())
        fail(Errc::config_error, where + ": sweep_v0 needs at least one value");
      continue;
    }

    double v = parse_literal(val, where);
    if (key == "p") cfg.p = v;
    else if (key == "N") cfg.N = require_integral(v, where);
    else if (key == "m") cfg.m = v;
    else if (key == "q") cfg.q = v;
    else if (key == "alpha") cfg.alpha = v;
    else if (key == "beta") cfg.beta = v;
    else if (key == "v0") cfg.v0 = v;
    else if (key == "epsilon_start") cfg.ode.epsilon_start = v;
    else if (key == "rel_tol") cfg.ode.rel_tol = v;
    else if (key == "abs_tol") cfg.ode.abs_tol = v;
    else if (key == "v_blowup_threshold") cfg.ode.v_blowup_threshold = v;
    else if (key == "max_steps")
      cfg.ode.max_steps = static_cast<long>(require_integral(v, where));
    else if (key == "max_step") cfg.ode.max_step = v;
    else if (key == "fit_lo") cfg.fit_lo = v;
    else if (key == "fit_hi") cfg.fit_hi = v;
    else if (key == "t0") cfg.t0 = v;
    else if (key == "t_end") cfg.t_end = v;
    else if (key == "x0") cfg.x0 = v;
    else if (key == "y0") cfg.y0 = v;
    else if (key == "z0") cfg.z0 = v;
    else if (key == "conv_tol") cfg.conv_tol = v;
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(require_integral(v, where));
    else
      fail(Errc::config_error, where + ": unknown key '" + key + "'");
  }

  for (const char* req : {"p", "N", "m", "q", "alpha", "beta"})
    if (!seen.count(req))
      fail(Errc::config_error, name + ":" + std::to_string(lineno + 1) +
                                   ": missing required key '" +
                                   std::string(req) + "'");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config_error, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# system parameters\n";
  os << "p = " << num(cfg.p) << "\n";
  os << "N = " << num(cfg.N) << "\n";
  os << "m = " << num(cfg.m) << "\n";
  os << "q = " << num(cfg.q) << "\n";
  os << "alpha = " << num(cfg.alpha) << "\n";
  os << "beta = " << num(cfg.beta) << "\n";
  os << "# integration\n";
  os << "v0 = " << num(cfg.v0) << "\n";
  os << "epsilon_start = " << num(cfg.ode.epsilon_start) << "\n";
  os << "rel_tol = " << num(cfg.ode.rel_tol) << "\n";
  os << "abs_tol = " << num(cfg.ode.abs_tol) << "\n";
  os << "v_blowup_threshold = " << num(cfg.ode.v_blowup_threshold) << "\n";
  os << "max_steps = " << cfg.ode.max_steps << "\n";
  os << "max_step = " << num(cfg.ode.max_step) << "\n";
  os << "# verification\n";
  os << "fit_lo = " << num(cfg.fit_lo) << "\n";
  os << "fit_hi = " << num(cfg.fit_hi) << "\n";
  os << "conv_tol = " << num(cfg.conv_tol) << "\n";
  os << "# log-time flow\n";
  os << "t0 = " << num(cfg.t0) << "\n";
  os << "t_end = " << num(cfg.t_end) << "\n";
  os << "x0 = " << num(cfg.x0) << "\n";
  os << "y0 = " << num(cfg.y0) << "\n";
  os << "z0 = " << num(cfg.z0) << "\n";
  os << "# sweep\n";
  os << "sweep_v0 =";
  for (double v : cfg.sweep_v0) os << " " << num(v);
  os << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

ParamSet config_params(const RunConfig& cfg) {
  return validate_params(cfg.p, cfg.N, cfg.m, cfg.q, cfg.alpha, cfg.beta);
}

}  // namespace blowup
