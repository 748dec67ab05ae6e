#include "adlab/berry.hpp"

#include <cmath>

#include "adlab/errors.hpp"

namespace adlab {

namespace {

constexpr double kGaugePoleTol = 1e-12;

struct CeVectors {
  Eigen::Vector3d a00;  // gradient-space diagonal connection
  Eigen::Vector3cd a10; // gradient-space transition connection
};

CeVectors ce_connection_vectors(const Eigen::Vector3d& l) {
  const double l3 = l.z();
  const double den = 1.0 - l3 * l3;
  if (std::abs(l3) >= 1.0 - kGaugePoleTol) {
    throw GaugePoleError("connection: |L3| ~ 1 gauge pole");
  }
  CeVectors out;
  out.a00 = Eigen::Vector3d(l.y() * l3, -l.x() * l3, 0.0) / (2.0 * den);
  const double root = std::sqrt(den);
  out.a10 = Eigen::Vector3cd(-l.y() / (2 * root), l.x() / (2 * root),
                             std::complex<double>(0, -1) / (2 * root));
  return out;
}

}  // namespace

ConnectionSample connection_analytic(const ModelSpec& spec, double r) {
  ConnectionSample out;
  out.r = r;
  if (spec.variant == ModelVariant::SpinRotating) {
    if (spec.f.kind != FVariant::Kind::Linear && std::abs(r) < spec.r_clamp) {
      throw SingularPointError("connection_analytic: R inside the clamp window");
    }
    const FEval fe = f_eval(spec.f, r, spec.r_clamp);
    out.alpha00 = 0.5 * std::cos(spec.theta) * fe.slope;
    out.alpha10 = 0.5 * std::sin(spec.theta) * fe.slope;
    return out;
  }
  const Eigen::Vector3d l = l_vector(spec, r).l;
  const Eigen::Vector3d ld = l_vector_dot(spec, r);
  const CeVectors cv = ce_connection_vectors(l);
  const double a00 = cv.a00.dot(ld);
  const std::complex<double> a10 = cv.a10(0) * ld(0) + cv.a10(1) * ld(1) + cv.a10(2) * ld(2);
  if (spec.sign_flip) {
    out.alpha00 = -a00;
    out.alpha10 = std::conj(a10);
  } else {
    out.alpha00 = a00;
    out.alpha10 = a10;
  }
  return out;
}

namespace {

Eigensystem2 vectors_at(const ModelSpec& spec, double param) {
  return spec.variant == ModelVariant::SpinRotating ? eigensystem_at_r(spec, param)
                                                    : eigensystem_analytic(spec, param);
}

ConnectionSample centered_estimate(const ModelSpec& spec, double r, double d) {
  const Eigensystem2 ec = vectors_at(spec, r);
  const Eigensystem2 ep = vectors_at(spec, r + d);
  const Eigensystem2 em = vectors_at(spec, r - d);

  if (std::abs(ep.v0.dot(em.v0)) < 0.9 || std::abs(ep.v1.dot(em.v1)) < 0.9) {
    throw StepTooLargeError("connection_numeric: gauge rotates too fast across the stencil");
  }

  const std::complex<double> i(0, 1);
  const Vector2cd dv0 = (ep.v0 - em.v0) / (2.0 * d);
  ConnectionSample out;
  out.r = r;
  out.alpha00 = std::real(i * ec.v0.dot(dv0));
  out.alpha10 = i * ec.v1.dot(dv0);
  out.beta0 = (ep.e0 - em.e0) / (2.0 * d);
  return out;
}

}  // namespace

ConnectionSample connection_numeric(const ModelSpec& spec, double r, double delta) {
  if (delta == 0) delta = 1e-6 * std::max(1.0, std::abs(r));
  if (spec.variant == ModelVariant::SpinRotating &&
      spec.f.kind != FVariant::Kind::Linear &&
      std::abs(r) - delta < spec.r_clamp) {
    throw SingularPointError("connection_numeric: stencil touches the clamp window");
  }

  const ConnectionSample a = centered_estimate(spec, r, delta);
  const ConnectionSample b = centered_estimate(spec, r, 0.5 * delta);

  ConnectionSample out;
  out.r = r;
  out.alpha00 = (4.0 * b.alpha00 - a.alpha00) / 3.0;
  out.alpha10 = (4.0 * b.alpha10 - a.alpha10) / 3.0;
  out.beta0 = (4.0 * b.beta0 - a.beta0) / 3.0;

  const double scale =
      std::max({std::abs(out.alpha00), std::abs(out.alpha10), std::abs(out.beta0), 1e-12});
  const double diff = std::max({std::abs(b.alpha00 - a.alpha00), std::abs(b.alpha10 - a.alpha10),
                                std::abs(b.beta0 - a.beta0)});
  if (diff / scale > 1e-4) {
    throw StepTooLargeError("connection_numeric: Richardson estimates disagree");
  }
  return out;
}

ConnectionRates connection_rate_at_time(const ModelSpec& spec, double t) {
  ConnectionRates out;
  if (spec.variant == ModelVariant::SpinRotating) {
    const ScheduleEval se = schedule_eval(spec.schedule, t);
    const FEval fe = f_eval(spec.f, se.r, spec.r_clamp);
    const double rate = fe.slope * se.drdt;
    out.a00 = 0.5 * std::cos(spec.theta) * rate;
    out.a10 = 0.5 * std::sin(spec.theta) * rate;
    return out;
  }
  const ConnectionSample cs = connection_analytic(spec, t);
  out.a00 = cs.alpha00;
  out.a10 = cs.alpha10;
  return out;
}

SigmaEstimate singularity_index(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 6) {
    throw InsufficientDataError("singularity_index: need at least 6 samples");
  }
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  for (const auto& [r, mag] : samples) {
    if (!(mag > 0) || r == 0 || !std::isfinite(mag) || !std::isfinite(r)) {
      throw std::invalid_argument("singularity_index: magnitudes must be positive and finite");
    }
    x.push_back(std::log(std::abs(r)));
    y.push_back(std::log(mag));
  }
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;

  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double resid = y[i] - slope * x[i] - intercept;
    ss += resid * resid;
  }
  SigmaEstimate out;
  out.sigma_hat = -slope;
  out.rms_residual = std::sqrt(ss / n);
  out.n_used = static_cast<int>(n);
  return out;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa,
                        double b, double fb, double m, double fm, double whole,
                        double tol, int depth) {
  if (depth > 40) throw QuadratureError("secular_bound: quadrature failed to converge");
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw QuadratureError("secular_bound: non-integrable rate function");
  }
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double secular_bound(double gap, const std::function<double(double)>& g, double eps,
                     double im_crossing) {
  if (!(eps > 0)) throw std::invalid_argument("secular_bound: eps must be positive");
  if (!(im_crossing > 0)) {
    throw std::invalid_argument("secular_bound: im_crossing must be positive");
  }
  auto integrand = [&](double s) { return gap / g(s); };
  const double a = 0, b = im_crossing;
  const double fa = integrand(a);
  const double fb = integrand(b);
  const double m = 0.5 * (a + b);
  const double fm = integrand(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw QuadratureError("secular_bound: non-integrable rate function");
  }
  const double whole = simpson(a, fa, b, fb, fm);
  const double integral =
      adaptive_simpson(integrand, a, fa, b, fb, m, fm, whole, 1e-12 * std::max(1.0, std::abs(whole)), 0);
  return std::exp(-std::abs(integral) / eps);
}

}  // namespace adlab
