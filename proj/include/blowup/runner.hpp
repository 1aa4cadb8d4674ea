#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "blowup/config.hpp"
#include "blowup/verify.hpp"

namespace blowup {

// Exit codes of the command layer.
//   0 success
//   2 invalid domain / degenerate coupling / config errors
//   3 no blow-up within the step budget
//   4 spectral verification failure
//   1 anything else
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_domain = 2;
inline constexpr int exit_no_blowup = 3;
inline constexpr int exit_spectral = 4;

struct CommandResult {
  int exit_code = exit_error;
  std::string manifest_path;  // empty on failure
  std::string message;        // diagnostic for stderr on failure
};

using Manifest = nlohmann::ordered_json;

// Everything the solve pipeline produces, for reuse by commands and tests.
// The pipeline integrates once with the configured blow-up threshold to
// locate R, then re-integrates with a threshold deep enough that the
// normalized window [fit_lo, fit_hi] in 1-r is populated, normalizes to
// the unit ball, and runs the profile/rate/convergence checks.
struct SolveArtifacts {
  ParamSet params;
  DerivedExponents exps;
  Regime regime;
  AsymptoticConstants consts;
  RadialSolution normalized;   // R_hat == 1
  ProfileABC profile;
  RateFit fit;
  ConvergenceReport convergence;
  UBehavior u_behavior;
  double R_hat = 0.0;           // physical blow-up radius (pass 2)
  double R_pass1 = 0.0;         // coarse estimate from pass 1
  double pass2_threshold = 0.0; // blow-up threshold used for the deep pass
  double flow_residual = 0.0;   // log-time vector-field residual of profile
};

SolveArtifacts run_solve_pipeline(const RunConfig& cfg);

// Built-in figure presets. A: bounded-u regime (alpha0 = 3/5); B: reference
// power blow-up set; C: two panels (p > 2 with q < p-1-alpha, and
// beta < 1 with m < 1).
std::optional<RunConfig> preset_config(const std::string& name);
std::vector<std::string> preset_names();

CommandResult cmd_params(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_solve(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_flow(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out_dir);
// presets: empty -> all
CommandResult cmd_figures(const std::vector<std::string>& presets,
                          const std::string& out_dir);

}  // namespace blowup
