#include "blowup/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/dynsys.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/radial.hpp"

namespace blowup {
namespace {

constexpr const char* k_tool_name = "blowup-lab";
constexpr const char* k_tool_version = "1.0.0";

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::domain_violation:
    case Errc::delta_zero:
    case Errc::config_error:
    case Errc::epsilon_too_large:
    case Errc::regime_mismatch:
      return exit_domain;
    case Errc::no_blowup_within_budget:
      return exit_no_blowup;
    case Errc::spectral_failure:
      return exit_spectral;
    default:
      return exit_error;
  }
}

template <class Fn>
CommandResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e.code());
    r.message = e.what();
    return r;
  } catch (const std::exception& e) {
    CommandResult r;
    r.exit_code = exit_error;
    r.message = e.what();
    return r;
  }
}

Manifest json_config(const RunConfig& cfg) {
  Manifest j;
  j["p"] = cfg.p;
  j["N"] = cfg.N;
  j["m"] = cfg.m;
  j["q"] = cfg.q;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["v0"] = cfg.v0;
  Manifest ode;
  ode["epsilon_start"] = cfg.ode.epsilon_start;
  ode["rel_tol"] = cfg.ode.rel_tol;
  ode["abs_tol"] = cfg.ode.abs_tol;
  ode["v_blowup_threshold"] = cfg.ode.v_blowup_threshold;
  ode["max_steps"] = cfg.ode.max_steps;
  ode["max_step"] = cfg.ode.max_step;
  j["ode"] = ode;
  j["fit_lo"] = cfg.fit_lo;
  j["fit_hi"] = cfg.fit_hi;
  j["t0"] = cfg.t0;
  j["t_end"] = cfg.t_end;
  j["x0"] = cfg.x0;
  j["y0"] = cfg.y0;
  j["z0"] = cfg.z0;
  j["conv_tol"] = cfg.conv_tol;
  j["sweep_v0"] = cfg.sweep_v0;
  j["seed"] = cfg.seed;
  return j;
}

Manifest json_params(const ParamSet& ps) {
  Manifest j;
  j["p"] = ps.p;
  j["N"] = ps.N;
  j["m"] = ps.m;
  j["q"] = ps.q;
  j["alpha"] = ps.alpha;
  j["beta"] = ps.beta;
  return j;
}

Manifest json_exponents(const DerivedExponents& ex) {
  Manifest j;
  j["delta"] = ex.delta;
  j["gamma"] = ex.gamma;
  j["alpha0"] = ex.alpha0;
  j["beta0"] = ex.beta0;
  j["gamma0"] = ex.gamma0;
  return j;
}

Manifest json_regime(const Regime& rg) {
  Manifest j;
  j["tag"] = regime_name(rg.tag);
  j["delta_threshold"] = rg.delta_threshold;
  j["note"] = rg.note;
  return j;
}

Manifest json_state(const State3& s) { return Manifest::array({s.X, s.Y, s.Z}); }

Manifest json_complex(const std::complex<double>& z) {
  Manifest j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Manifest base_manifest(const std::string& command, const RunConfig& cfg) {
  Manifest man;
  Manifest tool;
  tool["name"] = k_tool_name;
  tool["version"] = k_tool_version;
  man["tool"] = tool;
  man["command"] = command;
  man["config"] = json_config(cfg);
  return man;
}

CommandResult write_manifest(const Manifest& man, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / "manifest.json").string();
  write_text_file(path, man.dump(2) + "\n");
  CommandResult res;
  res.exit_code = exit_ok;
  res.manifest_path = path;
  return res;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  return (fs::path(out_dir) / name).string();
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

SolveArtifacts run_solve_pipeline(const RunConfig& cfg) {
  SolveArtifacts art;
  art.params = config_params(cfg);
  art.exps = derive_exponents(art.params);
  art.regime = classify_regime(art.exps, art.params);

  if (!in_blowup_regime(art.exps)) {
    // delta >= 0: v may still creep past the threshold at large radius, but
    // there is no finite-radius singularity to locate.
    RadialSolution s = integrate_radial(art.params, art.exps, cfg.v0, cfg.ode);
    fail(Errc::no_blowup_within_budget,
         "v crossed the threshold at r = " +
             fmt_double(s.samples.back().r) +
             ", but delta = " + fmt_double(art.exps.delta) +
             " >= 0 admits no finite-radius blow-up");
  }

  art.consts = compute_constants(art.exps, art.params);

  // Pass 1: configured threshold, coarse location of the singular radius.
  RadialSolution pass1 =
      integrate_radial(art.params, art.exps, cfg.v0, cfg.ode);
  art.R_pass1 = estimate_blowup_radius(pass1, art.consts, art.exps);

  // Pass 2: threshold deep enough that after normalization the samples
  // reach 1 - r ~ fit_lo / 2, so the fit window is fully populated. The
  // step cap keeps the same grid density relative to the rescaled radius.
  IntegratorOptions deep = cfg.ode;
  double log_thr = std::log(art.consts.mu) -
                   art.exps.beta0 * std::log(art.R_pass1 * cfg.fit_lo * 0.5);
  log_thr = std::min(log_thr, std::log(1e250));
  deep.v_blowup_threshold =
      std::max(cfg.ode.v_blowup_threshold, std::exp(log_thr));
  if (cfg.ode.max_step <= 0)
    deep.max_step = 0.2 * std::sqrt(deep.rel_tol) * art.R_pass1;
  art.pass2_threshold = deep.v_blowup_threshold;

  RadialSolution pass2 =
      integrate_radial(art.params, art.exps, cfg.v0, deep);
  pass2.R_hat = estimate_blowup_radius(pass2, art.consts, art.exps);
  art.R_hat = pass2.R_hat;

  art.normalized = normalize_to_unit(pass2, art.exps);
  art.profile = transform_abc(art.normalized, art.consts, art.exps);
  art.fit = fit_rates(art.normalized, cfg.fit_lo, cfg.fit_hi);
  art.convergence = check_convergence(art.profile, cfg.conv_tol);
  art.u_behavior = classify_u_behavior(art.normalized, art.exps);

  Trajectory traj = profile_to_log_time(art.profile, art.exps, art.params);
  art.flow_residual =
      nonautonomous_residual_rms(traj, art.exps, art.params);
  return art;
}

std::optional<RunConfig> preset_config(const std::string& name) {
  auto make = [](double p, double m, double q, double alpha, double beta) {
    RunConfig cfg;
    cfg.p = p;
    cfg.N = 3;
    cfg.m = m;
    cfg.q = q;
    cfg.alpha = alpha;
    cfg.beta = beta;
    return cfg;
  };
  if (name == "A") return make(2, 1, 6, 0, 0);        // alpha0 = 3/5 < 1
  if (name == "B") return make(2, 1, 2, 0, 0);        // reference set
  if (name == "C" || name == "C_left")
    return make(3, 4, 1, 0.5, 1);                     // p > 2, q < p-1-alpha
  if (name == "C_right") return make(2, 0.8, 2, 0, 0.5);  // beta, m < 1
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"A", "B", "C_left", "C_right"};
}

CommandResult cmd_params(const RunConfig& cfg, const std::string& out_dir) {
  return guarded([&] {
    auto t0 = Clock::now();
    Manifest man = base_manifest("params", cfg);

    ParamSet ps = config_params(cfg);
    DerivedExponents ex = derive_exponents(ps);
    Regime rg = classify_regime(ex, ps);
    IdentityResiduals idr = exponent_identity_residuals(ex, ps);

    man["parameters"] = json_params(ps);
    man["exponents"] = json_exponents(ex);
    Manifest idj;
    idj["a"] = idr.a;
    idj["b"] = idr.b;
    man["identity_residuals"] = idj;
    man["regime"] = json_regime(rg);

    if (in_blowup_regime(ex)) {
      AsymptoticConstants ac = compute_constants(ex, ps);
      ConstantResiduals cr = constant_relation_residuals(ac, ex, ps);
      Manifest cj;
      cj["lambda"] = ac.lambda;
      cj["mu"] = ac.mu;
      cj["nu"] = ac.nu;
      man["constants"] = cj;
      Manifest rj;
      rj["r1"] = cr.r1;
      rj["r2"] = cr.r2;
      rj["r3"] = cr.r3;
      man["relation_residuals"] = rj;
    } else {
      man["constants"] = nullptr;
      man["relation_residuals"] = nullptr;
    }

    Manifest tj;
    tj["total"] = ms_since(t0);
    man["timings_ms"] = tj;
    CommandResult res = write_manifest(man, out_dir);

    std::ostringstream sum;
    sum << "delta=" << ex.delta << " alpha0=" << ex.alpha0
        << " beta0=" << ex.beta0 << " gamma0=" << ex.gamma0
        << " regime=" << regime_name(rg.tag);
    if (in_blowup_regime(ex)) {
      AsymptoticConstants ac = compute_constants(ex, ps);
      sum << " lambda=" << ac.lambda << " mu=" << ac.mu << " nu=" << ac.nu;
    }
    res.message = sum.str();
    return res;
  });
}

CommandResult cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  return guarded([&] {
    auto t0 = Clock::now();
    Manifest man = base_manifest("solve", cfg);

    SolveArtifacts art = run_solve_pipeline(cfg);
    double t_solve = ms_since(t0);

    man["parameters"] = json_params(art.params);
    man["exponents"] = json_exponents(art.exps);
    man["regime"] = json_regime(art.regime);
    Manifest cj;
    cj["lambda"] = art.consts.lambda;
    cj["mu"] = art.consts.mu;
    cj["nu"] = art.consts.nu;
    man["constants"] = cj;

    Manifest sj;
    sj["v0"] = cfg.v0;
    sj["R_hat"] = art.R_hat;
    sj["R_pass1"] = art.R_pass1;
    sj["pass2_threshold"] = art.pass2_threshold;
    sj["samples"] = static_cast<long>(art.normalized.samples.size());
    man["solution"] = sj;

    Manifest fj;
    fj["alpha0_hat"] = art.fit.alpha0_hat;
    fj["beta0_hat"] = art.fit.beta0_hat;
    fj["lambda_hat"] = art.fit.lambda_hat;
    fj["mu_hat"] = art.fit.mu_hat;
    fj["fit_lo"] = art.fit.fit_lo;
    fj["fit_hi"] = art.fit.fit_hi;
    fj["residual"] = art.fit.residual;
    fj["n_samples"] = art.fit.n_samples;
    fj["alpha0_rel_err"] =
        std::abs(art.fit.alpha0_hat - art.exps.alpha0) / art.exps.alpha0;
    fj["beta0_rel_err"] =
        std::abs(art.fit.beta0_hat - art.exps.beta0) / art.exps.beta0;
    man["rate_fit"] = fj;

    Manifest vj;
    vj["final_distance"] = art.convergence.final_distance;
    vj["converged"] = art.convergence.converged;
    vj["first_converged_r"] = art.convergence.first_converged_r;
    vj["conv_tol"] = cfg.conv_tol;
    vj["u_behavior"] = u_behavior_name(art.u_behavior);
    vj["profile_eq_residual_rms"] = art.profile.eq_residual_rms;
    vj["log_time_residual_rms"] = art.flow_residual;
    man["verification"] = vj;

    Manifest outs;
    outs["solution_csv"] = "solution.csv";
    outs["profile_csv"] = "profile.csv";
    man["outputs"] = outs;

    write_text_file(out_path(out_dir, "solution.csv"),
                    csv_radial(art.normalized));
    write_text_file(out_path(out_dir, "profile.csv"),
                    csv_profile(art.profile));

    Manifest tj;
    tj["solve"] = t_solve;
    tj["total"] = ms_since(t0);
    man["timings_ms"] = tj;
    CommandResult res = write_manifest(man, out_dir);

    std::ostringstream sum;
    sum << "R=" << art.R_hat << " alpha0_hat=" << art.fit.alpha0_hat
        << " beta0_hat=" << art.fit.beta0_hat
        << " u=" << u_behavior_name(art.u_behavior)
        << " converged=" << (art.convergence.converged ? "yes" : "no");
    res.message = sum.str();
    return res;
  });
}

CommandResult cmd_flow(const RunConfig& cfg, const std::string& out_dir) {
  return guarded([&] {
    auto t0 = Clock::now();
    Manifest man = base_manifest("flow", cfg);

    ParamSet ps = config_params(cfg);
    DerivedExponents ex = derive_exponents(ps);
    Regime rg = classify_regime(ex, ps);
    man["parameters"] = json_params(ps);
    man["exponents"] = json_exponents(ex);
    man["regime"] = json_regime(rg);

    EquilibriumReport newton = find_equilibria(ex, ps, cfg.seed);
    EquilibriumReport spectral = eigen_report(ex, ps);
    double t_eq = ms_since(t0);

    Manifest ej;
    ej["points"] = Manifest::array();
    for (const auto& pt : newton.points) ej["points"].push_back(json_state(pt));
    ej["newton_starts"] = newton.newton_starts;
    ej["newton_converged"] = newton.newton_converged;
    man["equilibria"] = ej;

    Manifest pj;
    pj["C1"] = spectral.char_coeffs[0];
    pj["C2"] = spectral.char_coeffs[1];
    pj["C3"] = spectral.char_coeffs[2];
    pj["sum_residual"] = spectral.char_coeffs[0] + spectral.char_coeffs[1] +
                         spectral.char_coeffs[2] + 1.0;
    man["char_poly"] = pj;

    Manifest spj = Manifest::array();
    for (std::size_t i = 0; i < spectral.points.size(); ++i) {
      Manifest rowj;
      rowj["point"] = json_state(spectral.points[i]);
      Manifest evj = Manifest::array();
      for (const auto& z : spectral.eigenvalues[i]) evj.push_back(json_complex(z));
      rowj["eigenvalues"] = evj;
      rowj["stability"] = stability_name(spectral.stability[i]);
      spj.push_back(rowj);
    }
    man["spectra"] = spj;

    FlowKind kind{FlowKindTag::nonautonomous_log_time, cfg.t0};
    State3 s0{cfg.x0, cfg.y0, cfg.z0};
    Trajectory na = integrate_flow(kind, s0, cfg.t_end, ex, ps);
    Trajectory au = integrate_flow(FlowKind{FlowKindTag::autonomous, 0.0}, s0,
                                   cfg.t_end, ex, ps);
    double t_flow = ms_since(t0) - t_eq;

    auto dist_to = [](const State3& s, double w) {
      return std::max({std::abs(s.X - w), std::abs(s.Y - w), std::abs(s.Z - w)});
    };
    auto traj_summary = [&](const Trajectory& tr) {
      Manifest j;
      const State3& last = tr.samples.back().s;
      j["t_start"] = tr.samples.front().t;
      j["t_end"] = tr.samples.back().t;
      j["n_samples"] = static_cast<long>(tr.samples.size());
      j["final_state"] = json_state(last);
      j["final_distance_to_unit"] = dist_to(last, 1.0);
      j["final_distance_to_origin"] = dist_to(last, 0.0);
      return j;
    };
    man["trajectory"] = traj_summary(na);
    man["trajectory_autonomous"] = traj_summary(au);

    Manifest outs;
    outs["trajectory_csv"] = "trajectory.csv";
    outs["trajectory_autonomous_csv"] = "trajectory_autonomous.csv";
    man["outputs"] = outs;

    write_text_file(out_path(out_dir, "trajectory.csv"), csv_trajectory(na));
    write_text_file(out_path(out_dir, "trajectory_autonomous.csv"),
                    csv_trajectory(au));

    Manifest tj;
    tj["equilibria"] = t_eq;
    tj["trajectories"] = t_flow;
    tj["total"] = ms_since(t0);
    man["timings_ms"] = tj;
    CommandResult res = write_manifest(man, out_dir);

    std::ostringstream sum;
    sum << "equilibria=" << spectral.points.size();
    for (std::size_t i = 0; i < spectral.points.size(); ++i)
      sum << " " << stability_name(spectral.stability[i]);
    sum << " final_dist origin=" << dist_to(na.samples.back().s, 0.0)
        << " unit=" << dist_to(na.samples.back().s, 1.0);
    res.message = sum.str();
    return res;
  });
}

CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out_dir) {
  return guarded([&] {
    auto t0 = Clock::now();
    Manifest man = base_manifest("sweep", cfg);

    ParamSet ps = config_params(cfg);
    DerivedExponents ex = derive_exponents(ps);
    Regime rg = classify_regime(ex, ps);
    man["parameters"] = json_params(ps);
    man["exponents"] = json_exponents(ex);
    man["regime"] = json_regime(rg);

    if (cfg.sweep_v0.empty())
      fail(Errc::config_error, "sweep_v0 must list at least one start value");

    std::vector<std::future<double>> jobs;
    jobs.reserve(cfg.sweep_v0.size());
    for (double v0 : cfg.sweep_v0)
      jobs.push_back(std::async(std::launch::async, [&, v0] {
        return phi_map(ps, ex, v0, cfg.ode);
      }));

    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      SweepRow row;
      row.v0 = cfg.sweep_v0[i];
      row.R = jobs[i].get();
      row.invariant = row.v0 * std::pow(row.R, ex.beta0);
      rows.push_back(row);
    }

    double lo = rows.front().invariant, hi = lo, sum = 0;
    for (const auto& row : rows) {
      lo = std::min(lo, row.invariant);
      hi = std::max(hi, row.invariant);
      sum += row.invariant;
    }
    double mean = sum / static_cast<double>(rows.size());

    Manifest swj = Manifest::array();
    for (const auto& row : rows) {
      Manifest j;
      j["v0"] = row.v0;
      j["R"] = row.R;
      j["invariant"] = row.invariant;
      swj.push_back(j);
    }
    man["sweep"] = swj;
    Manifest ij;
    ij["mean"] = mean;
    ij["rel_spread"] = (hi - lo) / mean;
    man["scaling_invariant"] = ij;

    Manifest outs;
    outs["sweep_csv"] = "sweep.csv";
    man["outputs"] = outs;
    write_text_file(out_path(out_dir, "sweep.csv"), csv_sweep(rows));

    Manifest tj;
    tj["total"] = ms_since(t0);
    man["timings_ms"] = tj;
    CommandResult res = write_manifest(man, out_dir);

    std::ostringstream smsg;
    smsg << "runs=" << rows.size() << " invariant_mean=" << mean
         << " rel_spread=" << (hi - lo) / mean;
    res.message = smsg.str();
    return res;
  });
}

CommandResult cmd_figures(const std::vector<std::string>& presets,
                          const std::string& out_dir) {
  return guarded([&] {
    auto t0 = Clock::now();

    std::vector<std::string> names;
    auto add = [&](const std::string& n) {
      if (std::find(names.begin(), names.end(), n) == names.end())
        names.push_back(n);
    };
    if (presets.empty()) {
      for (const auto& n : preset_names()) add(n);
    } else {
      for (const auto& n : presets) {
        if (n == "C") {
          add("C_left");
          add("C_right");
        } else if (preset_config(n)) {
          add(n);
        } else {
          fail(Errc::config_error, "unknown preset '" + n + "'");
        }
      }
    }

    Manifest man;
    Manifest tool;
    tool["name"] = k_tool_name;
    tool["version"] = k_tool_version;
    man["tool"] = tool;
    man["command"] = "figures";
    man["presets"] = names;

    Manifest figs = Manifest::array();
    Manifest tj;
    for (const auto& name : names) {
      auto tp = Clock::now();
      RunConfig cfg = *preset_config(name);
      SolveArtifacts art = run_solve_pipeline(cfg);

      std::ostringstream title;
      title << "Preset " << name << ": p=" << cfg.p << " N=3 m=" << cfg.m
            << " q=" << cfg.q << " alpha=" << cfg.alpha << " beta=" << cfg.beta
            << "  (alpha0=" << art.exps.alpha0 << ", beta0=" << art.exps.beta0
            << ")";
      std::string svg_name = "figure_" + name + ".svg";
      std::string csv_name = "profile_" + name + ".csv";
      write_text_file(out_path(out_dir, svg_name),
                      svg_profile_chart(art.profile, title.str()));
      write_text_file(out_path(out_dir, csv_name), csv_profile(art.profile));

      Manifest fj;
      fj["preset"] = name;
      fj["parameters"] = json_params(art.params);
      fj["exponents"] = json_exponents(art.exps);
      fj["regime"] = regime_name(art.regime.tag);
      fj["u_behavior"] = u_behavior_name(art.u_behavior);
      fj["R_hat"] = art.R_hat;
      fj["final_distance"] = art.convergence.final_distance;
      fj["converged"] = art.convergence.converged;
      fj["svg"] = svg_name;
      fj["profile_csv"] = csv_name;
      figs.push_back(fj);
      tj[name] = ms_since(tp);
    }
    man["figures"] = figs;
    tj["total"] = ms_since(t0);
    man["timings_ms"] = tj;
    CommandResult res = write_manifest(man, out_dir);

    std::ostringstream sum;
    sum << "rendered";
    for (const auto& name : names) sum << " " << name;
    res.message = sum.str();
    return res;
  });
}

}  // namespace blowup
