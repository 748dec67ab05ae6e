#include "adlab/integrate.hpp"

#include <cmath>
#include <complex>

#include "adlab/errors.hpp"
#include "adlab/ode.hpp"

namespace adlab {

void IntegratorConfig::validate() const {
  if (!(rtol > 0) || !(atol > 0)) throw ConfigError("integrator: tolerances must be positive");
  if (!(h_min > 0)) throw ConfigError("integrator: h_min must be positive");
  if (h_init != 0 && h_init < h_min) throw ConfigError("integrator: h_init below h_min");
  if (max_steps < 1) throw ConfigError("integrator: max_steps must be positive");
}

double instantaneous_fidelity(const ModelSpec& spec, double t, const Vector2cd& psi) {
  const Eigensystem2 es = eig2(hamiltonian_at(spec, t));
  return std::norm(es.v0.dot(psi));
}

Vector2cd ground_state_at(const ModelSpec& spec, double t) {
  return eig2(hamiltonian_at(spec, t)).v0;
}

namespace {

ode::Options ode_options(const IntegratorConfig& cfg) {
  ode::Options opt;
  opt.rtol = cfg.rtol;
  opt.atol = cfg.atol;
  opt.h_init = cfg.h_init;
  opt.h_min = cfg.h_min;
  opt.max_steps = cfg.max_steps;
  return opt;
}

}  // namespace

Trajectory propagate(const ModelSpec& spec, const Vector2cd& psi0, double t0,
                     double t1, const IntegratorConfig& cfg, int n_samples) {
  spec.validate();
  cfg.validate();
  if (!(t0 < t1)) throw std::invalid_argument("propagate: requires t0 < t1");
  if (n_samples < 2) throw std::invalid_argument("propagate: need at least 2 samples");
  if (std::abs(psi0.squaredNorm() - 1.0) > 2e-12) {
    throw std::invalid_argument("propagate: initial state must be unit norm");
  }

  Trajectory traj;
  traj.spec = spec;
  traj.config = cfg;
  traj.t.reserve(n_samples);

  const std::complex<double> minus_i(0, -1);
  auto rhs = [&](double t, const Vector2cd& y, Vector2cd& dy) {
    dy = minus_i * (hamiltonian_at(spec, t, traj.diagnostics.clamp_hits) * y);
  };

  auto record = [&](double t, const Vector2cd& y) {
    const ScheduleEval se = schedule_eval(spec.schedule, t);
    const Eigensystem2 es = eig2(hamiltonian_at(spec, t));
    traj.t.push_back(t);
    traj.r.push_back(se.r);
    traj.psi.push_back(y);
    traj.c0_sq.push_back(std::norm(es.v0.dot(y)));
    traj.c1_sq.push_back(std::norm(es.v1.dot(y)));
    traj.f_ad.push_back(traj.c0_sq.back());
    traj.norm_err.push_back(std::abs(y.squaredNorm() - 1.0));
    traj.eigen.push_back(es);
  };

  // Rolling state for the step-level fidelity minimum.
  double prev_t = t0;
  Vector2cd prev_psi = psi0;
  traj.bracket.t_lo = t0;
  traj.bracket.t_best = t0;
  traj.bracket.t_hi = t1;
  traj.bracket.f_best = instantaneous_fidelity(spec, t0, psi0);
  traj.bracket.psi_lo = psi0;
  bool awaiting_hi = true;

  auto per_step = [&](double t, Vector2cd& y) {
    const double n2 = y.squaredNorm();
    const double drift = std::abs(n2 - 1.0);
    if (drift > traj.diagnostics.max_norm_error) traj.diagnostics.max_norm_error = drift;
    if (cfg.renorm && n2 > 0) {
      y /= std::sqrt(n2);
      traj.diagnostics.rescale_log_sum += std::abs(0.5 * std::log(n2));
    }
    const double f = instantaneous_fidelity(spec, t, y);
    if (awaiting_hi) {
      traj.bracket.t_hi = t;
      awaiting_hi = false;
    }
    if (f < traj.bracket.f_best) {
      traj.bracket.f_best = f;
      traj.bracket.t_best = t;
      traj.bracket.t_lo = prev_t;
      traj.bracket.psi_lo = prev_psi;
      awaiting_hi = true;
    }
    prev_t = t;
    prev_psi = y;
  };

  ode::Dopri5<Vector2cd> stepper(ode_options(cfg));
  Vector2cd y = psi0;
  double t = t0;
  record(t0, psi0);

  auto fill_step_counts = [&]() {
    traj.diagnostics.steps_accepted = stepper.stats().accepted;
    traj.diagnostics.steps_rejected = stepper.stats().rejected;
  };

  auto fail = [&](const char* what) {
    if (awaiting_hi) traj.bracket.t_hi = prev_t;
    fill_step_counts();
    traj.diagnostics.reached_end = false;
    return IntegrationError(std::string(what) + " (t reached " + std::to_string(t) + ")",
                            std::move(traj));
  };

  const double dt = (t1 - t0) / static_cast<double>(n_samples - 1);
  try {
    for (int k = 1; k < n_samples; ++k) {
      const double t_target = k == n_samples - 1 ? t1 : t0 + k * dt;
      stepper.integrate(rhs, t, y, t_target, per_step);
      record(t, y);
    }
  } catch (const ode::StepUnderflow& e) {
    throw fail(e.what());
  } catch (const ode::StepBudgetExceeded& e) {
    throw fail(e.what());
  }

  if (awaiting_hi) traj.bracket.t_hi = t1;
  fill_step_counts();
  return traj;
}

ConvergenceReport convergence_check(const ModelSpec& spec, const Vector2cd& psi0,
                                    double t0, double t1, const IntegratorConfig& cfg) {
  IntegratorConfig tight = cfg;
  tight.rtol = cfg.rtol / 100.0;
  tight.atol = cfg.atol / 100.0;

  const Trajectory a = propagate(spec, psi0, t0, t1, cfg, 2);
  const Trajectory b = propagate(spec, psi0, t0, t1, tight, 2);

  ConvergenceReport rep;
  rep.final_state_discrepancy = (a.psi.back() - b.psi.back()).norm();
  rep.converged = rep.final_state_discrepancy <= 1e-7;
  return rep;
}

}  // namespace adlab
