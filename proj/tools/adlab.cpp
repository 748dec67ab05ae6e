#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "adlab/adiabatic.hpp"
#include "adlab/berry.hpp"
#include "adlab/config.hpp"
#include "adlab/errors.hpp"
#include "adlab/integrate.hpp"
#include "adlab/io.hpp"
#include "adlab/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIntegration = 3;
constexpr int kExitScanFailed = 4;

double model_epsilon(const adlab::ModelSpec& spec) {
  if (spec.schedule.kind == adlab::Schedule::Kind::NonlinearTime) return spec.schedule.epsilon;
  return spec.schedule.omega / spec.omega0;
}

adlab::ExperimentConfig load_config(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty() && !preset.empty()) {
    throw adlab::ConfigError("give either --config or --preset, not both");
  }
  if (!config_path.empty()) return adlab::load_config_file(config_path);
  if (!preset.empty()) return adlab::preset_config(preset);
  throw adlab::ConfigError("a --config file or --preset name is required");
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

json config_echo(const adlab::ExperimentConfig& cfg) {
  return json::parse(adlab::serialize_config(cfg));
}

json diagnostics_json(const adlab::TrajectoryDiagnostics& d) {
  return json{{"steps_accepted", d.steps_accepted},
              {"steps_rejected", d.steps_rejected},
              {"clamp_hits", d.clamp_hits},
              {"max_norm_error", d.max_norm_error},
              {"rescale_log_sum", d.rescale_log_sum},
              {"reached_end", d.reached_end}};
}

int cmd_models(bool as_json) {
  if (as_json) {
    json j;
    j["variants"] = {"spin_rotating", "counterexample"};
    j["f_variants"] = {"linear", "log", "power"};
    j["schedules"] = {"linear_time", "nonlinear_time"};
    json presets = json::object();
    for (const auto& name : adlab::preset_names()) {
      presets[name] = json::parse(adlab::preset_json(name));
    }
    j["presets"] = presets;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "model variants:\n"
            << "  spin_rotating    spin-1/2 in a rotating field, drive phase f(R)\n"
            << "  counterexample   time-domain construction with drive axis L(t)\n"
            << "f variants: linear (f=R), log (f=ln|R|), power (f=|R|^(1-sigma))\n"
            << "schedules:  linear_time (R=omega t), nonlinear_time (R=eps sign(t)|t|^sigma_t)\n"
            << "presets:\n";
  for (const auto& name : adlab::preset_names()) {
    std::cout << "  " << name << "\n";
  }
  return kExitOk;
}

int cmd_run(const adlab::ExperimentConfig& cfg_in, std::optional<double> epsilon,
            const std::string& out_override) {
  adlab::ExperimentConfig cfg = cfg_in;
  if (epsilon) cfg.model = adlab::spec_for_epsilon(cfg.model, *epsilon);
  const fs::path out_dir = out_override.empty() ? cfg.output.dir : out_override;
  fs::create_directories(out_dir);

  const auto [t0, t1] = adlab::run_interval(cfg.model);
  const adlab::Vector2cd psi0 = adlab::ground_state_at(cfg.model, t0);

  adlab::Trajectory traj;
  bool failed = false;
  std::string failure;
  try {
    traj = adlab::propagate(cfg.model, psi0, t0, t1, cfg.integrator, cfg.n_samples);
  } catch (const adlab::IntegrationError& e) {
    traj = e.partial;
    failed = true;
    failure = e.what();
  }

  std::ostringstream csv;
  if (traj.t.size() >= 2) {
    const adlab::AdiabaticFrame frame = adlab::build_frame(traj);
    adlab::write_trajectory_csv(csv, traj, frame);
  } else {
    csv << "t,R,f_ad,c0sq,c1sq,dyn_phase,geo_phase,norm_err\n";
  }
  write_file(out_dir / "trajectory.csv", csv.str());

  if (failed) {
    json err{{"error", failure}, {"diagnostics", diagnostics_json(traj.diagnostics)}};
    write_file(out_dir / "error.json", err.dump(2) + "\n");
    std::cerr << "integration failed: " << failure << "\n";
    return kExitIntegration;
  }

  const adlab::FidelityResult fid = adlab::fidelity(traj);
  json meta;
  meta["epsilon"] = model_epsilon(cfg.model);
  meta["t_range"] = {t0, t1};
  meta["f_min"] = fid.f_min;
  meta["t_at_f_min"] = fid.t_min;
  meta["diagnostics"] = diagnostics_json(traj.diagnostics);
  meta["config"] = config_echo(cfg);
  write_file(out_dir / "run_meta.json", meta.dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const adlab::ExperimentConfig& cfg, int jobs, const std::string& out_override) {
  if (!cfg.sweep) throw adlab::ConfigError("sweep: config has no sweep block");
  const fs::path out_dir = out_override.empty() ? cfg.output.dir : out_override;
  fs::create_directories(out_dir);

  const auto records =
      adlab::run_sweep(cfg.model, cfg.sweep->epsilons, cfg.integrator, jobs, cfg.n_samples);

  std::ostringstream csv;
  adlab::write_sweep_csv(csv, records);
  write_file(out_dir / "sweep.csv", csv.str());

  json fit_j;
  try {
    const adlab::PowerLawFit fit = adlab::fit_power_law(records);
    fit_j["slope"] = fit.slope;
    fit_j["intercept"] = fit.intercept;
    fit_j["r2"] = fit.r_squared;
    fit_j["n_points_used"] = fit.n_points_used;
    fit_j["noise_floor_excluded"] = fit.noise_floor_excluded;
    fit_j["dropped_largest"] = fit.dropped_largest;
  } catch (const adlab::InsufficientDataError& e) {
    fit_j["error"] = e.what();
  }
  const auto predicted = adlab::predicted_exponent(cfg.model);
  if (predicted) {
    fit_j["predicted_exponent"] = *predicted;
  } else {
    fit_j["predicted_exponent"] = nullptr;
  }
  fit_j["verdict"] = adlab::to_string(adlab::breakdown_check(records));
  write_file(out_dir / "fit.json", fit_j.dump(2) + "\n");

  long failures = 0;
  for (const auto& r : records) failures += r.failed ? 1 : 0;
  json meta;
  meta["n_runs"] = records.size();
  meta["failed_runs"] = failures;
  meta["config"] = config_echo(cfg);
  write_file(out_dir / "sweep_meta.json", meta.dump(2) + "\n");
  return kExitOk;
}

int cmd_scan(const adlab::ExperimentConfig& cfg, const std::string& out_override) {
  const fs::path out_dir = out_override.empty() ? cfg.output.dir : out_override;
  fs::create_directories(out_dir);

  const adlab::ScanPlan plan = cfg.scan ? *cfg.scan : adlab::default_scan_plan(cfg.model);
  std::vector<adlab::ConnectionSample> rows;
  long failures = 0;
  for (int i = 0; i < plan.n_points; ++i) {
    const double u = static_cast<double>(i) / (plan.n_points - 1);
    const double r = plan.log_spacing
                         ? std::exp(std::log(plan.lo) + u * (std::log(plan.hi) - std::log(plan.lo)))
                         : plan.lo + u * (plan.hi - plan.lo);
    try {
      rows.push_back(adlab::connection_analytic(cfg.model, r));
    } catch (const std::runtime_error&) {
      adlab::ConnectionSample bad;
      bad.r = r;
      bad.alpha00 = std::nan("");
      bad.alpha10 = std::complex<double>(std::nan(""), std::nan(""));
      bad.beta0 = std::nan("");
      rows.push_back(bad);
      ++failures;
    }
  }

  std::vector<std::pair<double, double>> mags;
  for (const auto& s : rows) {
    const double m = std::abs(s.alpha10);
    if (std::isfinite(m) && m > 0 && s.r != 0) mags.emplace_back(s.r, m);
  }
  std::optional<adlab::SigmaEstimate> sigma;
  if (mags.size() >= 6) sigma = adlab::singularity_index(mags);

  std::ostringstream csv;
  adlab::write_scan_csv(csv, rows, sigma ? &*sigma : nullptr);
  write_file(out_dir / "scan.csv", csv.str());

  json meta;
  meta["n_points"] = plan.n_points;
  meta["failed_points"] = failures;
  if (sigma) {
    meta["sigma_hat"] = sigma->sigma_hat;
    meta["sigma_rms_residual"] = sigma->rms_residual;
  }
  meta["config"] = config_echo(cfg);
  write_file(out_dir / "scan_meta.json", meta.dump(2) + "\n");

  if (failures == plan.n_points) {
    std::cerr << "scan: every point failed\n";
    return kExitScanFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adiabatic-fidelity experiments for driven two-level systems"};
  app.require_subcommand(1);

  bool models_json = false;
  auto* models = app.add_subcommand("models", "list model variants and presets");
  models->add_flag("--json", models_json, "machine-readable listing");

  std::string config_path, preset, out_dir;
  double epsilon = 0;
  bool have_epsilon = false;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file (JSON)");
    sub->add_option("--preset", preset, "named preset experiment");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* run = app.add_subcommand("run", "propagate one trajectory and write CSV");
  add_common(run);
  run->add_option("--epsilon", epsilon, "override the adiabatic parameter")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { have_epsilon = true; });

  auto* sweep = app.add_subcommand("sweep", "scan the adiabatic parameter, fit the power law");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "concurrent workers")->check(CLI::PositiveNumber);

  auto* scan = app.add_subcommand("scan", "tabulate Berry connections along the drive");
  add_common(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (models->parsed()) return cmd_models(models_json);
    const adlab::ExperimentConfig cfg = load_config(config_path, preset);
    if (run->parsed()) {
      return cmd_run(cfg, have_epsilon ? std::optional<double>(epsilon) : std::nullopt, out_dir);
    }
    if (sweep->parsed()) return cmd_sweep(cfg, jobs, out_dir);
    if (scan->parsed()) return cmd_scan(cfg, out_dir);
  } catch (const adlab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
