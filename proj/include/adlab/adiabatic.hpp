#pragma once

#include <complex>
#include <vector>

#include "adlab/integrate.hpp"
#include "adlab/models.hpp"

namespace adlab {

struct AdiabaticParameter {
  double value = 0;
  bool unbounded = false;  // |dR/dt| diverges somewhere on the interval
};

// max |dR/dt| / gap over the run interval. For nonlinear schedules with
// sigma_t < 1 the rate diverges at t=0; the supremum over the evaluation
// grid is returned with the unbounded flag set.
AdiabaticParameter adiabatic_parameter(const ModelSpec& spec);

enum class FrameGauge { Eig2, Analytic };

// Gauge-continuous instantaneous frame along a trajectory, with the
// accumulated dynamical and geometric phases.
struct AdiabaticFrame {
  std::vector<Vector2cd> v0;  // aligned: successive overlaps real positive
  std::vector<Vector2cd> v1;
  std::vector<double> dyn_phase;  // cumulative trapezoid of E0
  std::vector<double> geo_phase;  // i Int <E0|dE0/dt> dt in the source gauge
  std::vector<double> gap;
  double geo_phase_imag_residue = 0;
  double max_overlap_arg = 0;  // largest per-step gauge rotation seen
  int continuity_violations = 0;
  double richardson_residual = 0;  // |geo(full grid) - geo(half grid)|
};

AdiabaticFrame build_frame(const Trajectory& traj, FrameGauge gauge = FrameGauge::Eig2);

struct FidelityResult {
  std::vector<double> series;
  double f_min = 1.0;
  double t_min = 0;
};

// F_ad(t_k) plus the global minimum, refined by golden-section search
// inside the step-level bracket stored on the trajectory.
FidelityResult fidelity(const Trajectory& traj);

struct CoefficientSeries {
  std::vector<double> c0_sq;
  std::vector<double> c1_sq;
};

CoefficientSeries coefficients(const Trajectory& traj);

struct IncrementResult {
  std::complex<double> delta_c1;  // value at the supremum of |DeltaC1(t)|
  double sup_abs = 0;
  double t_sup = 0;
  bool error_flagged = false;  // quadrature stopped early near a singularity
};

// First-order coefficient increment with the ground state frozen at
// C0 ~ 1: DeltaC1(t) = i Int exp[i Int (gap + 2 a00) dt'] a10 dt,
// tracked to its supremum over [t0, t1].
IncrementResult first_order_increment(const ModelSpec& spec, double t0, double t1,
                                      const IntegratorConfig& cfg);

}  // namespace adlab
