#include <doctest.h>

#include <cmath>
#include <random>

#include "adlab/adiabatic.hpp"
#include "adlab/berry.hpp"
#include "adlab/errors.hpp"
#include "oracles.hpp"

using namespace adlab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

ModelSpec linear_spin(double theta, double omega, double omega0 = 1.0) {
  ModelSpec s;
  s.theta = theta;
  s.omega0 = omega0;
  s.f = FVariant::linear();
  s.schedule = Schedule::linear_time(omega);
  return s;
}

Trajectory run(const ModelSpec& s, int n_samples = 512, double rtol = 1e-10,
               double atol = 1e-12) {
  IntegratorConfig cfg;
  cfg.rtol = rtol;
  cfg.atol = atol;
  const auto [t0, t1] = run_interval(s);
  return propagate(s, ground_state_at(s, t0), t0, t1, cfg, n_samples);
}

}  // namespace

TEST_CASE("adiabatic parameter for the linear and counterexample drives") {
  ModelSpec s = linear_spin(0.5, 0.01, 1.0);
  CHECK(adiabatic_parameter(s).value == doctest::Approx(0.01));
  CHECK_FALSE(adiabatic_parameter(s).unbounded);

  ModelSpec ce;
  ce.variant = ModelVariant::CounterExample;
  ce.theta = 0.5;
  ce.omega0 = 0.5;
  ce.schedule = Schedule::linear_time(0.05);
  CHECK(adiabatic_parameter(ce).value == doctest::Approx(0.1));
}

TEST_CASE("adiabatic parameter for nonlinear schedules") {
  ModelSpec s = linear_spin(0.5, 0.0);
  s.schedule = Schedule::nonlinear_time(0.01, 2.0);
  s.r_range = {-2 * kPi, 2 * kPi};
  const double t_edge = std::sqrt(2 * kPi / 0.01);
  const AdiabaticParameter ap = adiabatic_parameter(s);
  CHECK(ap.value == doctest::Approx(2 * 0.01 * t_edge));
  CHECK_FALSE(ap.unbounded);

  s.schedule = Schedule::nonlinear_time(0.01, 0.5);
  const AdiabaticParameter sub = adiabatic_parameter(s);
  CHECK(sub.unbounded);
  CHECK(sub.value > 0);
  CHECK(std::isfinite(sub.value));
}

TEST_CASE("frame of a constant Hamiltonian: zero geometric phase") {
  ModelSpec s = linear_spin(0.0, 0.1);
  const Trajectory traj = run(s, 128);
  const AdiabaticFrame frame = build_frame(traj);
  CHECK(std::abs(frame.geo_phase.back()) < 1e-12);
  // ground energy -1/2 over the whole window
  const double span = traj.t.back() - traj.t.front();
  CHECK(frame.dyn_phase.back() == doctest::Approx(-0.5 * span).epsilon(1e-12));
  CHECK(frame.continuity_violations == 0);
}

TEST_CASE("closed drive loop accumulates the solid-angle geometric phase") {
  const double theta = kPi / 3;
  ModelSpec s = linear_spin(theta, 0.05);
  s.r_range = {0.0, 2 * kPi};  // one full turn of the drive phase
  const Trajectory traj = run(s, 8192);
  const AdiabaticFrame frame = build_frame(traj);
  // eig2 anchors the larger component, giving the single-valued gauge whose
  // loop integral is the holonomy -pi(1-cos theta)
  const double expect = -kPi * (1.0 - std::cos(theta));
  CHECK(std::abs(frame.geo_phase.back() - expect) < 1e-6);
  CHECK(frame.geo_phase_imag_residue < 1e-10);
  CHECK(frame.max_overlap_arg < 0.5);
  CHECK(frame.continuity_violations == 0);
  CHECK(frame.richardson_residual < 1e-5);
}

TEST_CASE("geometric phase equals the connection integral in the analytic gauge") {
  const double theta = 1.1;
  ModelSpec s = linear_spin(theta, 0.05);
  s.r_range = {0.5, 4.5};
  const Trajectory traj = run(s, 16384);
  const AdiabaticFrame frame = build_frame(traj, FrameGauge::Analytic);
  // chain rule: Int alpha00 dR with alpha00 = cos(theta)/2 constant here
  const double expect = 0.5 * std::cos(theta) * (4.5 - 0.5);
  CHECK(std::abs(frame.geo_phase.back() - expect) < 1e-8);
  CHECK(frame.richardson_residual < 1e-8);

  ModelSpec p = s;
  p.f = FVariant::power(0.5);
  const Trajectory tp = run(p, 32768);
  const AdiabaticFrame fp = build_frame(tp, FrameGauge::Analytic);
  const double expect_p = oracles::integrate(
      [&](double r) { return connection_analytic(p, r).alpha00; }, 0.5, 4.5);
  CHECK(std::abs(fp.geo_phase.back() - expect_p) < 1e-8);
}

TEST_CASE("frame rejects degenerate spectra") {
  ModelSpec s = linear_spin(0.3, 0.1);
  Trajectory traj = run(s, 64);
  for (auto& es : traj.eigen) {
    es.e0 = -1e-12;
    es.e1 = 1e-12;
  }
  CHECK_THROWS_AS(build_frame(traj), DegenerateSpectrumError);
}

TEST_CASE("fidelity of eigenstate initializations") {
  ModelSpec s = linear_spin(0.9, 0.05);
  const auto [t0, t1] = run_interval(s);
  IntegratorConfig cfg;

  const Trajectory ground = propagate(s, ground_state_at(s, t0), t0, t1, cfg, 256);
  CHECK(ground.f_ad.front() == doctest::Approx(1.0).epsilon(1e-14));

  const Vector2cd excited = eig2(hamiltonian_at(s, t0)).v1;
  const Trajectory exc = propagate(s, excited, t0, t1, cfg, 256);
  CHECK(exc.f_ad.front() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("refined minimum matches the closed-form envelope") {
  const double theta = kPi / 2, omega = 0.1;
  ModelSpec s = linear_spin(theta, omega);
  const Trajectory traj = run(s, 4096);
  const FidelityResult fid = fidelity(traj);
  const double varpi = std::sqrt(1.0 + omega * omega);
  const double expect = 1.0 - (omega * omega) / (varpi * varpi);
  CHECK(std::abs(fid.f_min - expect) < 1e-7);
}

TEST_CASE("fidelity is gauge invariant") {
  ModelSpec s = linear_spin(0.7, 0.1);
  Trajectory traj = run(s, 128);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ph(0, 2 * kPi);
  std::vector<double> before = traj.f_ad;
  for (size_t k = 0; k < traj.eigen.size(); ++k) {
    const std::complex<double> u = std::exp(std::complex<double>(0, ph(rng)));
    traj.eigen[k].v0 *= u;
    traj.eigen[k].v1 *= std::exp(std::complex<double>(0, ph(rng)));
    const double f = std::norm(traj.eigen[k].v0.dot(traj.psi[k]));
    CHECK(std::abs(f - before[k]) <= 1e-15);
  }
}

TEST_CASE("coefficients close to unit probability") {
  ModelSpec s = linear_spin(1.2, 0.08);
  const Trajectory traj = run(s, 512);
  const CoefficientSeries cs = coefficients(traj);
  for (size_t k = 0; k < cs.c0_sq.size(); ++k) {
    CHECK(std::abs(cs.c0_sq[k] + cs.c1_sq[k] - 1.0) <= 1e-10);
  }
}

TEST_CASE("first transition maximum matches the closed form") {
  const double theta = kPi / 2, omega = 0.1;
  ModelSpec s = linear_spin(theta, omega);
  IntegratorConfig cfg;
  const auto [t0, t1] = run_interval(s);
  (void)t1;
  const double varpi = std::sqrt(1.0 + omega * omega);
  const double t_peak = t0 + kPi / varpi;  // first envelope maximum
  const Trajectory traj = propagate(s, ground_state_at(s, t0), t0, t_peak, cfg, 128);
  const double expect = oracles::rabi_c1_sq(theta, 1.0, omega, t0, t_peak);
  CHECK(std::abs(traj.c1_sq.back() - expect) <= 1e-8);
}

TEST_CASE("first-order increment vanishes without coupling") {
  ModelSpec s = linear_spin(0.0, 0.05);
  IntegratorConfig cfg;
  const IncrementResult inc = first_order_increment(s, 0.0, 50.0, cfg);
  CHECK(inc.sup_abs <= 1e-12);
  CHECK_FALSE(inc.error_flagged);
}

TEST_CASE("first-order increment tracks the full solve at small epsilon") {
  const double omega = 0.01;
  ModelSpec s = linear_spin(kPi / 4, omega);
  IntegratorConfig cfg;
  const auto [t0, t1] = run_interval(s);
  const IncrementResult inc = first_order_increment(s, t0, t1, cfg);
  const Trajectory traj = run(s, 1024);
  const FidelityResult fid = fidelity(traj);
  const double infidelity = 1.0 - fid.f_min;
  const double ratio = inc.sup_abs * inc.sup_abs / infidelity;
  CHECK(std::abs(ratio - 1.0) <= 0.05);
}

TEST_CASE("first-order increment scales linearly in the drive rate") {
  ModelSpec base = linear_spin(kPi / 4, 0.01);
  IntegratorConfig cfg;
  std::vector<double> omegas = {0.02, 0.01, 0.005};
  std::vector<double> sups;
  for (double w : omegas) {
    ModelSpec s = base;
    s.schedule = Schedule::linear_time(w);
    const auto [t0, t1] = run_interval(s);
    sups.push_back(first_order_increment(s, t0, t1, cfg).sup_abs);
  }
  const double slope01 = std::log(sups[0] / sups[1]) / std::log(omegas[0] / omegas[1]);
  const double slope12 = std::log(sups[1] / sups[2]) / std::log(omegas[1] / omegas[2]);
  CHECK(std::abs(slope01 - 1.0) <= 0.05);
  CHECK(std::abs(slope12 - 1.0) <= 0.05);
}
