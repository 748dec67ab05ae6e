#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "adlab/linalg.hpp"
#include "adlab/models.hpp"

namespace adlab {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0;  // 0: choose automatically
  double h_min = 1e-12;
  long max_steps = 100000000;
  bool renorm = true;

  void validate() const;  // throws ConfigError
};

struct TrajectoryDiagnostics {
  long steps_accepted = 0;
  long steps_rejected = 0;
  long clamp_hits = 0;
  double max_norm_error = 0;    // max ||psi|^2 - 1| seen at accepted steps
  double rescale_log_sum = 0;   // sum |log rescale| when renormalizing
  bool reached_end = true;
};

// Bracket around the step with the smallest instantaneous fidelity,
// kept so the minimum can be refined by re-propagating inside it.
struct FMinBracket {
  double t_lo = 0;
  double t_best = 0;
  double t_hi = 0;
  double f_best = 1.0;
  Vector2cd psi_lo = Vector2cd::Zero();
};

struct Trajectory {
  ModelSpec spec;
  IntegratorConfig config;
  std::vector<double> t;
  std::vector<double> r;
  std::vector<Vector2cd> psi;
  std::vector<Eigensystem2> eigen;
  std::vector<double> f_ad;
  std::vector<double> c0_sq;
  std::vector<double> c1_sq;
  std::vector<double> norm_err;
  FMinBracket bracket;
  TrajectoryDiagnostics diagnostics;
};

struct IntegrationError : std::runtime_error {
  Trajectory partial;
  IntegrationError(const std::string& what, Trajectory partial_traj)
      : std::runtime_error(what), partial(std::move(partial_traj)) {}
};

// |<E0(t)|psi>|^2 against the instantaneous ground state.
double instantaneous_fidelity(const ModelSpec& spec, double t, const Vector2cd& psi);

Vector2cd ground_state_at(const ModelSpec& spec, double t);

// Solve i dPsi/dt = H(t) Psi from t0 to t1, recording n_samples evenly
// spaced samples (forced step endpoints, no interpolation). The fidelity
// is tracked at every accepted step so the global minimum is bracketed
// at step resolution even when the sample grid is coarse.
Trajectory propagate(const ModelSpec& spec, const Vector2cd& psi0, double t0,
                     double t1, const IntegratorConfig& cfg, int n_samples = 4096);

struct ConvergenceReport {
  double final_state_discrepancy = 0;
  bool converged = false;
};

// Re-runs at 100x tighter tolerances and compares final states.
ConvergenceReport convergence_check(const ModelSpec& spec, const Vector2cd& psi0,
                                    double t0, double t1, const IntegratorConfig& cfg);

}  // namespace adlab
