#include "adlab/models.hpp"

#include <cmath>
#include <limits>

#include "adlab/errors.hpp"

namespace adlab {

namespace {

constexpr double kGaugePoleTol = 1e-12;

double pow_abs(double x, double p) {
  const double a = std::abs(x);
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 0.5) return std::sqrt(a);
  if (p == 1.0) return a;
  return std::pow(a, p);
}

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

}  // namespace

void ModelSpec::validate() const {
  if (!(omega0 > 0) || !std::isfinite(omega0)) {
    throw ConfigError("model: omega0 must be positive and finite");
  }
  if (!std::isfinite(theta)) throw ConfigError("model: theta must be finite");
  if (!(r_clamp > 0)) throw ConfigError("model: r_clamp must be positive");
  if (f.kind == FVariant::Kind::Power && !(f.sigma > 0 && f.sigma < 1)) {
    throw ConfigError("model: power singularity index must be in (0,1)");
  }
  if (schedule.kind == Schedule::Kind::LinearTime) {
    if (!(schedule.omega > 0)) throw ConfigError("model: schedule omega must be positive");
  } else {
    if (!(schedule.epsilon > 0)) throw ConfigError("model: schedule epsilon must be positive");
    if (!(schedule.sigma_t > 0)) throw ConfigError("model: schedule sigma_t must be positive");
  }
  if (variant == ModelVariant::SpinRotating) {
    if (!(r_range[0] < r_range[1])) throw ConfigError("model: r_range must have R0 < R1");
    if (schedule.kind == Schedule::Kind::NonlinearTime &&
        std::abs(r_range[0] + r_range[1]) > 1e-12 * std::abs(r_range[1] - r_range[0])) {
      throw ConfigError("model: nonlinear schedule requires a symmetric r_range");
    }
  } else {
    if (!(t_range[0] < t_range[1])) throw ConfigError("model: t_range must have t0 < t1");
    if (schedule.kind != Schedule::Kind::LinearTime) {
      throw ConfigError("model: counterexample uses a linear-time schedule");
    }
  }
}

ScheduleEval schedule_eval(const Schedule& s, double t) {
  ScheduleEval out;
  if (s.kind == Schedule::Kind::LinearTime) {
    out.r = s.omega * t;
    out.drdt = s.omega;
    return out;
  }
  out.r = s.epsilon * sgn(t) * pow_abs(t, s.sigma_t);
  if (t == 0.0) {
    if (s.sigma_t < 1.0) {
      out.drdt = std::numeric_limits<double>::infinity();
    } else if (s.sigma_t == 1.0) {
      out.drdt = s.epsilon;
    } else {
      out.drdt = 0.0;
    }
  } else {
    out.drdt = s.epsilon * s.sigma_t * pow_abs(t, s.sigma_t - 1.0);
  }
  return out;
}

FEval f_eval(const FVariant& f, double r, double clamp) {
  FEval out;
  switch (f.kind) {
    case FVariant::Kind::Linear:
      out.value = r;
      out.slope = 1.0;
      return out;
    case FVariant::Kind::Log: {
      double rc = r;
      if (std::abs(rc) < clamp) {
        rc = sgn(rc) * clamp;
        out.clamped = true;
      }
      out.value = std::log(std::abs(rc));
      out.slope = 1.0 / rc;
      return out;
    }
    case FVariant::Kind::Power: {
      double rc = r;
      if (std::abs(rc) < clamp) {
        rc = sgn(rc) * clamp;
        out.clamped = true;
      }
      out.value = pow_abs(rc, 1.0 - f.sigma);
      out.slope = (1.0 - f.sigma) * sgn(rc) * std::pow(std::abs(rc), -f.sigma);
      return out;
    }
  }
  return out;
}

namespace {

Matrix2cd spin_rotating_h(const ModelSpec& spec, double f_value) {
  const double st = std::sin(spec.theta);
  const double ct = std::cos(spec.theta);
  Vector3d n(st * std::cos(f_value), st * std::sin(f_value), ct);
  return from_pauli(-0.5 * spec.omega0, n);
}

}  // namespace

Matrix2cd hamiltonian_at(const ModelSpec& spec, double t, long& clamp_hits) {
  if (spec.variant == ModelVariant::SpinRotating) {
    const ScheduleEval se = schedule_eval(spec.schedule, t);
    const FEval fe = f_eval(spec.f, se.r, spec.r_clamp);
    if (fe.clamped) ++clamp_hits;
    return spin_rotating_h(spec, fe.value);
  }
  const LVector lv = l_vector(spec, t);
  const double c = (spec.sign_flip ? -0.5 : 0.5) * spec.omega0;
  return from_pauli(c, lv.l);
}

Matrix2cd hamiltonian_at(const ModelSpec& spec, double t) {
  long ignored = 0;
  return hamiltonian_at(spec, t, ignored);
}

LVector l_vector(const ModelSpec& spec, double t) {
  if (spec.variant != ModelVariant::CounterExample) {
    throw ConfigError("l_vector: spec is not a counterexample model");
  }
  const double w0 = spec.omega0;
  const double w = spec.schedule.omega;
  const double ct = std::cos(spec.theta);
  const double st = std::sin(spec.theta);
  const double varpi2 = w0 * w0 + w * w + 2 * w * w0 * ct;
  if (!(varpi2 > 1e-12 * w0 * w0)) {
    throw ConfigError("l_vector: varpi is degenerate for these parameters");
  }
  const double varpi = std::sqrt(varpi2);
  const double ch = std::cos(0.5 * varpi * t);
  const double sh = std::sin(0.5 * varpi * t);

  LVector out;
  out.varpi = varpi;
  out.l.x() = st * (w0 * w0 + 2 * w * w0 * ct * ch * ch + w * w * (ch * ch - sh * sh)) / varpi2;
  out.l.y() = w * st * (2.0 * sh * ch) / varpi;
  out.l.z() = ct + 2 * w * w0 * st * st * sh * sh / varpi2;
  out.raw_norm_error = std::abs(out.l.norm() - 1.0);
  out.l.normalize();
  return out;
}

Vector3d l_vector_dot(const ModelSpec& spec, double t) {
  const double w0 = spec.omega0;
  const double w = spec.schedule.omega;
  const double ct = std::cos(spec.theta);
  const double st = std::sin(spec.theta);
  const double varpi = l_vector(spec, t).varpi;
  const double s = std::sin(varpi * t);
  const double c = std::cos(varpi * t);

  Vector3d d;
  d.x() = -st * w * (w + w0 * ct) * s / varpi;
  d.y() = w * st * c;
  d.z() = w * w0 * st * st * s / varpi;
  return d;
}

Eigensystem2 eigensystem_analytic(const ModelSpec& spec, double t) {
  Eigensystem2 es;
  es.e0 = -0.5 * spec.omega0;
  es.e1 = 0.5 * spec.omega0;

  if (spec.variant == ModelVariant::SpinRotating) {
    const ScheduleEval se = schedule_eval(spec.schedule, t);
    return eigensystem_at_r(spec, se.r);
  }

  const LVector lv = l_vector(spec, t);
  const double l3 = lv.l.z();
  if (std::abs(l3) >= 1.0 - kGaugePoleTol) {
    throw GaugePoleError("eigensystem_analytic: gauge pole at |L3| ~ 1");
  }
  const double phi = 0.5 * std::atan2(lv.l.y(), lv.l.x());
  const double p = std::sqrt(0.5 * (1.0 - l3));
  const double q = std::sqrt(0.5 * (1.0 + l3));
  const std::complex<double> em(std::cos(phi), -std::sin(phi));
  const std::complex<double> ep(std::cos(phi), std::sin(phi));
  const Vector2cd lower(p * em, -q * ep);
  const Vector2cd upper(q * em, p * ep);
  // sign_flip negates H, swapping which dressed state is the ground state.
  es.v0 = spec.sign_flip ? upper : lower;
  es.v1 = spec.sign_flip ? lower : upper;
  return es;
}

Eigensystem2 eigensystem_at_r(const ModelSpec& spec, double r) {
  if (spec.variant != ModelVariant::SpinRotating) {
    throw ConfigError("eigensystem_at_r: spin-rotating models only");
  }
  const FEval fe = f_eval(spec.f, r, spec.r_clamp);
  const double half = 0.5 * fe.value;
  const double c = std::cos(0.5 * spec.theta);
  const double s = std::sin(0.5 * spec.theta);
  const std::complex<double> em(std::cos(half), -std::sin(half));
  const std::complex<double> ep(std::cos(half), std::sin(half));

  Eigensystem2 es;
  es.e0 = -0.5 * spec.omega0;
  es.e1 = 0.5 * spec.omega0;
  es.v0 = Vector2cd(em * c, ep * s);
  es.v1 = Vector2cd(em * s, -ep * c);
  return es;
}

std::array<double, 2> run_interval(const ModelSpec& spec) {
  if (spec.variant == ModelVariant::CounterExample) return spec.t_range;
  if (spec.schedule.kind == Schedule::Kind::LinearTime) {
    return {spec.r_range[0] / spec.schedule.omega, spec.r_range[1] / spec.schedule.omega};
  }
  const double t1 = std::pow(spec.r_range[1] / spec.schedule.epsilon, 1.0 / spec.schedule.sigma_t);
  return {-t1, t1};
}

ModelSpec spec_for_epsilon(const ModelSpec& templ, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    throw ConfigError("spec_for_epsilon: epsilon must be positive and finite");
  }
  ModelSpec s = templ;
  if (s.variant == ModelVariant::CounterExample) {
    s.omega0 = s.schedule.omega / eps;
  } else if (s.schedule.kind == Schedule::Kind::LinearTime) {
    s.schedule.omega = eps * s.omega0;
  } else {
    s.schedule.epsilon = eps;
  }
  return s;
}

const char* to_string(ModelVariant v) {
  return v == ModelVariant::SpinRotating ? "spin_rotating" : "counterexample";
}

const char* to_string(FVariant::Kind k) {
  switch (k) {
    case FVariant::Kind::Linear: return "linear";
    case FVariant::Kind::Log: return "log";
    case FVariant::Kind::Power: return "power";
  }
  return "?";
}

const char* to_string(Schedule::Kind k) {
  return k == Schedule::Kind::LinearTime ? "linear_time" : "nonlinear_time";
}

}  // namespace adlab
