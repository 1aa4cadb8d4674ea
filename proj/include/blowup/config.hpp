#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blowup/radial.hpp"

namespace blowup {

// Flat `key = value` config, `#` comments, decimal literals only. Lists
// (sweep_v0) are space-separated literals. parse -> serialize -> parse is
// the identity.
struct RunConfig {
  // system parameters (required keys)
  double p = 0, N = 0, m = 0, q = 0, alpha = 0, beta = 0;

  double v0 = 1.0;
  IntegratorOptions ode;

  double fit_lo = 1e-6, fit_hi = 1e-2;  // rate-fit window in 1-r
  double t0 = 0.1, t_end = 50.0;        // log-time flow span
  double x0 = 0.5, y0 = 0.5, z0 = 0.5;  // flow start
  double conv_tol = 0.01;

  std::vector<double> sweep_v0 = {0.5, 1.0, 2.0, 4.0};
  std::uint64_t seed = 20260818ull;
};

// Throws Error(config_error) with file:line on malformed lines, unknown keys,
// bad literals, and a named message for missing required keys.
RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

ParamSet config_params(const RunConfig& cfg);  // validates

}  // namespace blowup
