#pragma once

#include <array>
#include <string>

#include "adlab/linalg.hpp"

namespace adlab {

enum class ModelVariant { SpinRotating, CounterExample };

// Profile of the drive phase f(R).
struct FVariant {
  enum class Kind { Linear, Log, Power };
  Kind kind = Kind::Linear;
  double sigma = 0.5;  // Power only, in (0,1)

  static FVariant linear() { return {Kind::Linear, 0.0}; }
  static FVariant log() { return {Kind::Log, 1.0}; }
  static FVariant power(double sigma) { return {Kind::Power, sigma}; }
};

// R(t) = omega t, or R(t) = epsilon sign(t) |t|^sigma_t.
struct Schedule {
  enum class Kind { LinearTime, NonlinearTime };
  Kind kind = Kind::LinearTime;
  double omega = 0.01;    // LinearTime
  double epsilon = 0.01;  // NonlinearTime prefactor
  double sigma_t = 2.0;   // NonlinearTime exponent

  static Schedule linear_time(double omega) {
    Schedule s;
    s.kind = Kind::LinearTime;
    s.omega = omega;
    return s;
  }
  static Schedule nonlinear_time(double epsilon, double sigma_t) {
    Schedule s;
    s.kind = Kind::NonlinearTime;
    s.epsilon = epsilon;
    s.sigma_t = sigma_t;
    return s;
  }
};

struct ScheduleEval {
  double r = 0;
  double drdt = 0;  // +inf at t=0 for NonlinearTime with sigma_t < 1
};

struct FEval {
  double value = 0;
  double slope = 0;  // df/dR
  bool clamped = false;
};

// One driven two-level Hamiltonian. The counterexample variant is built
// from the rotating-spin model with f(R)=R, R=omega t, and runs over a
// fixed time window instead of a fixed parameter range.
struct ModelSpec {
  ModelVariant variant = ModelVariant::SpinRotating;
  double theta = 0.785398163397448309616;  // pi/4
  double omega0 = 1.0;
  FVariant f;
  Schedule schedule;
  bool sign_flip = false;  // CounterExample only
  std::array<double, 2> r_range = {-6.283185307179586477, 6.283185307179586477};
  std::array<double, 2> t_range = {-6.283185307179586477, 6.283185307179586477};
  double r_clamp = 1e-12;

  void validate() const;  // throws ConfigError
};

ScheduleEval schedule_eval(const Schedule& s, double t);

FEval f_eval(const FVariant& f, double r, double clamp = 1e-12);

Matrix2cd hamiltonian_at(const ModelSpec& spec, double t);
// Same, counting |R| clamp hits inside f evaluation.
Matrix2cd hamiltonian_at(const ModelSpec& spec, double t, long& clamp_hits);

struct LVector {
  Vector3d l;    // unit vector
  double varpi;  // sqrt(omega0^2 + omega^2 + 2 omega omega0 cos theta)
  double raw_norm_error;  // ||L|-1| of the closed form before renormalization
};

// Drive axis of the counterexample Hamiltonian, H = (omega0/2) L(t).sigma.
LVector l_vector(const ModelSpec& spec, double t);
// d L / dt, closed form.
Vector3d l_vector_dot(const ModelSpec& spec, double t);

// Instantaneous eigensystem in the model's analytic gauge. Agrees with
// eig2 up to a unit phase per vector. Throws GaugePoleError when the
// counterexample gauge degenerates (|L3| -> 1).
Eigensystem2 eigensystem_analytic(const ModelSpec& spec, double t);

// SpinRotating eigensystem as a function of the drive parameter R.
Eigensystem2 eigensystem_at_r(const ModelSpec& spec, double r);

// Run window: derived from r_range for SpinRotating (stretched so the
// parameter always covers the fixed range), taken directly from t_range
// for the counterexample.
std::array<double, 2> run_interval(const ModelSpec& spec);

// Concrete spec for one point of an epsilon sweep. Linear schedules set
// omega = eps * omega0; nonlinear schedules set the prefactor; the
// counterexample keeps omega fixed and sets omega0 = omega / eps so the
// time window stays put while the gap grows.
ModelSpec spec_for_epsilon(const ModelSpec& templ, double eps);

const char* to_string(ModelVariant v);
const char* to_string(FVariant::Kind k);
const char* to_string(Schedule::Kind k);

}  // namespace adlab
