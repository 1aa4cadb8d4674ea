// Command-line front end: params | solve | flow | sweep | figures.
// Prints the manifest path on success; diagnostics go to stderr.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/runner.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  double v0 = 0;  // 0 = keep config value
};

void add_common(CLI::App* sub, CommonOpts& opts, bool with_v0) {
  sub->add_option("-c,--config", opts.config_path,
                  "Path to a key = value config file");
  sub->add_option("--preset", opts.preset,
                  "Built-in parameter set (A, B, C, C_left, C_right)");
  sub->add_option("-o,--out", opts.out_dir, "Output directory")
      ->capture_default_str();
  if (with_v0)
    sub->add_option("--v0", opts.v0, "Override the core value v(0) > 0");
}

// Config resolution: --config wins, --preset is the fallback; one of the
// two is required. BLOWUP_LAB_SEED overrides the seed either way.
blowup::RunConfig resolve_config(const CommonOpts& opts) {
  std::optional<blowup::RunConfig> cfg;
  if (!opts.config_path.empty()) {
    cfg = blowup::parse_config_file(opts.config_path);
  } else if (!opts.preset.empty()) {
    cfg = blowup::preset_config(opts.preset);
    if (!cfg)
      blowup::fail(blowup::Errc::config_error,
                   "unknown preset '" + opts.preset + "'");
  } else {
    blowup::fail(blowup::Errc::config_error,
                 "either --config or --preset is required");
  }
  if (opts.v0 != 0) {
    if (!(opts.v0 > 0))
      blowup::fail(blowup::Errc::config_error, "--v0 must be positive");
    cfg->v0 = opts.v0;
  }
  if (const char* env = std::getenv("BLOWUP_LAB_SEED")) {
    char* end = nullptr;
    unsigned long long s = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      blowup::fail(blowup::Errc::config_error,
                   "BLOWUP_LAB_SEED must be a decimal integer");
    cfg->seed = s;
  }
  return *cfg;
}

int finish(const blowup::CommandResult& res) {
  if (res.exit_code == blowup::exit_ok) {
    if (!res.message.empty()) std::cerr << res.message << "\n";
    std::cout << res.manifest_path << "\n";
  } else {
    std::cerr << "error: " << res.message << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "blowup-lab: radial blow-up profiles of a coupled quasilinear "
      "diffusion system, their boundary rates, and the associated "
      "log-time flow"};
  app.require_subcommand(1);

  CommonOpts params_opts, solve_opts, flow_opts, sweep_opts;
  std::vector<std::string> figure_presets;
  std::string figures_out = "out";

  CLI::App* sub_params = app.add_subcommand(
      "params", "Derived exponents, regime, asymptotic constants");
  add_common(sub_params, params_opts, false);

  CLI::App* sub_solve = app.add_subcommand(
      "solve", "Integrate to blow-up, normalize, fit boundary rates");
  add_common(sub_solve, solve_opts, true);

  CLI::App* sub_flow = app.add_subcommand(
      "flow", "Equilibria, spectra, and trajectories of the log-time flow");
  add_common(sub_flow, flow_opts, false);

  CLI::App* sub_sweep = app.add_subcommand(
      "sweep", "Blow-up radius as a function of v(0); scaling-law check");
  add_common(sub_sweep, sweep_opts, false);

  CLI::App* sub_figures =
      app.add_subcommand("figures", "Render the built-in preset profiles");
  sub_figures->add_option("--preset", figure_presets,
                          "Subset of presets (default: all)");
  sub_figures->add_option("-o,--out", figures_out, "Output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub_params->parsed())
      return finish(blowup::cmd_params(resolve_config(params_opts),
                                       params_opts.out_dir));
    if (sub_solve->parsed())
      return finish(
          blowup::cmd_solve(resolve_config(solve_opts), solve_opts.out_dir));
    if (sub_flow->parsed())
      return finish(
          blowup::cmd_flow(resolve_config(flow_opts), flow_opts.out_dir));
    if (sub_sweep->parsed())
      return finish(
          blowup::cmd_sweep(resolve_config(sweep_opts), sweep_opts.out_dir));
    if (sub_figures->parsed())
      return finish(blowup::cmd_figures(figure_presets, figures_out));
  } catch (const blowup::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == blowup::Errc::config_error ? blowup::exit_domain
                                                  : blowup::exit_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return blowup::exit_error;
  }
  return blowup::exit_error;
}
