#include "adlab/adiabatic.hpp"

#include <algorithm>
#include <cmath>

#include "adlab/berry.hpp"
#include "adlab/errors.hpp"
#include "adlab/ode.hpp"

namespace adlab {

AdiabaticParameter adiabatic_parameter(const ModelSpec& spec) {
  spec.validate();
  AdiabaticParameter out;
  if (spec.schedule.kind == Schedule::Kind::LinearTime) {
    out.value = spec.schedule.omega / spec.omega0;
    return out;
  }
  const auto [t0, t1] = run_interval(spec);
  const int n = 4097;
  double max_rate = 0;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * i / (n - 1);
    if (t == 0.0 && spec.schedule.sigma_t < 1.0) {
      out.unbounded = true;
      continue;
    }
    max_rate = std::max(max_rate, std::abs(schedule_eval(spec.schedule, t).drdt));
  }
  if (spec.schedule.sigma_t < 1.0) out.unbounded = true;
  out.value = max_rate / spec.omega0;
  return out;
}

namespace {

std::vector<Vector2cd> gauge_path(const Trajectory& traj, FrameGauge gauge, int level) {
  const size_t n = traj.t.size();
  std::vector<Vector2cd> w(n);
  for (size_t k = 0; k < n; ++k) {
    if (gauge == FrameGauge::Eig2) {
      w[k] = level == 0 ? traj.eigen[k].v0 : traj.eigen[k].v1;
    } else {
      const Eigensystem2 es = eigensystem_analytic(traj.spec, traj.t[k]);
      w[k] = level == 0 ? es.v0 : es.v1;
    }
  }
  return w;
}

// i Int <w|dw/dt> dt by centered differences and cumulative trapezoid,
// second-order one-sided stencils at the ends. Returns the real phase;
// *imag_residue collects the would-be imaginary part.
std::vector<double> geometric_phase_series(const std::vector<Vector2cd>& w,
                                           const std::vector<double>& t,
                                           double* imag_residue) {
  const size_t n = w.size();
  std::vector<double> integrand(n), residue(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> d;
    if (k == 0) {
      d = w[0].dot(-3.0 * w[0] + 4.0 * w[1] - w[2]) / (t[2] - t[0]);
    } else if (k == n - 1) {
      d = w[k].dot(3.0 * w[k] - 4.0 * w[k - 1] + w[k - 2]) / (t[k] - t[k - 2]);
    } else {
      d = w[k].dot(w[k + 1] - w[k - 1]) / (t[k + 1] - t[k - 1]);
    }
    // gamma = i Int <w|w'> with <w|w'> purely imaginary in exact arithmetic
    integrand[k] = std::imag(d) * -1.0;
    residue[k] = std::real(d);
  }
  std::vector<double> phase(n, 0.0);
  double res = 0;
  for (size_t k = 1; k < n; ++k) {
    const double half = 0.5 * (t[k] - t[k - 1]);
    phase[k] = phase[k - 1] + half * (integrand[k - 1] + integrand[k]);
    res += half * (residue[k - 1] + residue[k]);
  }
  if (imag_residue) *imag_residue = std::abs(res);
  return phase;
}

}  // namespace

AdiabaticFrame build_frame(const Trajectory& traj, FrameGauge gauge) {
  const size_t n = traj.t.size();
  if (n < 2) throw std::invalid_argument("build_frame: need at least 2 samples");

  AdiabaticFrame frame;
  frame.gap.resize(n);
  for (size_t k = 0; k < n; ++k) {
    frame.gap[k] = traj.eigen[k].gap();
    if (frame.gap[k] < 1e-10) {
      throw DegenerateSpectrumError("build_frame: spectrum gap collapsed");
    }
  }

  std::vector<Vector2cd> w0 = gauge_path(traj, gauge, 0);
  std::vector<Vector2cd> w1 = gauge_path(traj, gauge, 1);

  // Geometric phase in the source gauge, full grid and half-density grid.
  frame.geo_phase = geometric_phase_series(w0, traj.t, &frame.geo_phase_imag_residue);
  if (n >= 5) {
    // Compare against the double-spacing grid at the last common sample.
    const size_t m = ((n - 1) / 2) * 2;
    std::vector<Vector2cd> w0h;
    std::vector<double> th;
    for (size_t k = 0; k <= m; k += 2) {
      w0h.push_back(w0[k]);
      th.push_back(traj.t[k]);
    }
    const std::vector<double> gh = geometric_phase_series(w0h, th, nullptr);
    frame.richardson_residual = std::abs(gh.back() - frame.geo_phase[m]);
  }

  // Parallel alignment: rotate each sample so successive overlaps come out
  // real positive. The raw per-step rotation is the continuity diagnostic;
  // the accumulated correction carries the transported phase.
  frame.v0 = std::move(w0);
  frame.v1 = std::move(w1);
  for (auto* level : {&frame.v0, &frame.v1}) {
    auto& v = *level;
    Vector2cd prev_raw = v[0];
    double cum = 0;
    for (size_t k = 1; k < n; ++k) {
      const std::complex<double> ov = prev_raw.dot(v[k]);
      prev_raw = v[k];
      const double chi = std::atan2(ov.imag(), ov.real());
      frame.max_overlap_arg = std::max(frame.max_overlap_arg, std::abs(chi));
      if (std::abs(chi) >= 0.5 || ov.real() <= 0) ++frame.continuity_violations;
      cum -= chi;
      v[k] *= std::exp(std::complex<double>(0, cum));
    }
  }

  frame.dyn_phase.assign(n, 0.0);
  for (size_t k = 1; k < n; ++k) {
    const double half = 0.5 * (traj.t[k] - traj.t[k - 1]);
    frame.dyn_phase[k] =
        frame.dyn_phase[k - 1] + half * (traj.eigen[k - 1].e0 + traj.eigen[k].e0);
  }
  return frame;
}

namespace {

// Golden-section minimum of f on [a, b], tolerance in the argument.
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

FidelityResult fidelity(const Trajectory& traj) {
  FidelityResult out;
  out.series = traj.f_ad;
  out.f_min = traj.bracket.f_best;
  out.t_min = traj.bracket.t_best;

  const double lo = traj.bracket.t_lo;
  const double hi = traj.bracket.t_hi;
  if (!(hi > lo)) return out;

  const std::complex<double> minus_i(0, -1);
  long clamp_sink = 0;
  auto rhs = [&](double t, const Vector2cd& y, Vector2cd& dy) {
    dy = minus_i * (hamiltonian_at(traj.spec, t, clamp_sink) * y);
  };
  auto f_at = [&](double tt) {
    Vector2cd y = traj.bracket.psi_lo;
    if (tt > lo) {
      ode::Options opt;
      opt.rtol = traj.config.rtol;
      opt.atol = traj.config.atol;
      opt.h_min = traj.config.h_min;
      ode::Dopri5<Vector2cd> stepper(opt);
      double t = lo;
      stepper.integrate(rhs, t, y, tt, [](double, Vector2cd&) {});
      y.normalize();
    }
    return instantaneous_fidelity(traj.spec, tt, y);
  };

  const auto [t_ref, f_ref] = golden_min(f_at, lo, hi, 1e-6);
  if (f_ref < out.f_min) {
    out.f_min = f_ref;
    out.t_min = t_ref;
  }
  return out;
}

CoefficientSeries coefficients(const Trajectory& traj) {
  return {traj.c0_sq, traj.c1_sq};
}

IncrementResult first_order_increment(const ModelSpec& spec, double t0, double t1,
                                      const IntegratorConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (!(t0 < t1)) throw std::invalid_argument("first_order_increment: requires t0 < t1");

  // State: (Re DeltaC1, Im DeltaC1, chi) with chi the small diagonal-phase
  // correction. The dominant phase gap*(t-t0) is applied analytically so
  // error control never sees a large accumulated angle.
  const double gap = spec.omega0;
  auto rhs = [&](double t, const Eigen::Vector3d& y, Eigen::Vector3d& dy) {
    const ConnectionRates cr = connection_rate_at_time(spec, t);
    const double phi = gap * (t - t0) + y(2);
    const std::complex<double> e(std::cos(phi), std::sin(phi));
    const std::complex<double> dc = std::complex<double>(0, 1) * e * cr.a10;
    dy(0) = dc.real();
    dy(1) = dc.imag();
    dy(2) = 2.0 * cr.a00;
  };

  ode::Options opt;
  opt.rtol = cfg.rtol;
  opt.atol = std::min(cfg.atol, 1e-10);
  opt.h_min = cfg.h_min;
  opt.max_steps = cfg.max_steps;
  opt.h_max = (2.0 * M_PI / gap) / 32.0;  // dense envelope tracking

  IncrementResult out;
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  double t = t0;

  // Rolling triple around the running maximum of |DeltaC1|.
  struct Node {
    double t = 0, m = 0;
    std::complex<double> c;
  };
  Node prev{t0, 0.0, {0, 0}}, best{t0, 0.0, {0, 0}}, best_lo, best_hi;
  bool have_hi = false, awaiting_hi = false;

  auto track = [&](double tt, const Eigen::Vector3d& yy) {
    Node cur{tt, std::hypot(yy(0), yy(1)), {yy(0), yy(1)}};
    if (awaiting_hi) {
      best_hi = cur;
      have_hi = true;
      awaiting_hi = false;
    }
    if (cur.m > best.m) {
      best_lo = prev;
      best = cur;
      awaiting_hi = true;
      have_hi = false;
    }
    prev = cur;
  };

  ode::Dopri5<Eigen::Vector3d> stepper(opt);
  try {
    stepper.integrate(rhs, t, y, t1, track);
  } catch (const ode::StepUnderflow&) {
    out.error_flagged = true;
  } catch (const ode::StepBudgetExceeded&) {
    out.error_flagged = true;
  }

  out.delta_c1 = best.c;
  out.sup_abs = best.m;
  out.t_sup = best.t;

  // Parabolic refinement of the envelope maximum through the neighbors.
  if (have_hi && best.m > 0 && best_lo.t < best.t && best.t < best_hi.t) {
    const double x1 = best_lo.t - best.t, x3 = best_hi.t - best.t;
    const double y1 = best_lo.m, y2 = best.m, y3 = best_hi.m;
    const double denom = x1 * x3 * (x1 - x3);
    if (std::abs(denom) > 0) {
      const double a = (x3 * (y1 - y2) - x1 * (y3 - y2)) / denom;
      const double b = (x1 * x1 * (y3 - y2) - x3 * x3 * (y1 - y2)) / denom;
      if (a < 0) {
        const double xv = -b / (2 * a);
        if (xv > x1 && xv < x3) {
          const double mv = y2 + b * xv + a * xv * xv;
          if (mv > out.sup_abs) {
            out.sup_abs = mv;
            out.t_sup = best.t + xv;
            out.delta_c1 *= mv / best.m;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace adlab
