#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adlab::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0;  // 0: choose automatically
  double h_min = 1e-12;
  double h_max = 0;  // 0: no cap
  long max_steps = 100000000;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
};

struct StepUnderflow : std::runtime_error {
  double t_reached;
  explicit StepUnderflow(double t)
      : std::runtime_error("ode: step size underflow"), t_reached(t) {}
};

struct StepBudgetExceeded : std::runtime_error {
  double t_reached;
  explicit StepBudgetExceeded(double t)
      : std::runtime_error("ode: step budget exceeded"), t_reached(t) {}
};

// Dormand-Prince 5(4) with PI step-size control (error per step, safety
// factor 0.9, growth clamped to [0.2, 5]). FSAL: the last stage of an
// accepted step seeds the next one. State is any Eigen vector type.
template <class State>
class Dopri5 {
 public:
  explicit Dopri5(const Options& opt) : opt_(opt) {}

  const StepStats& stats() const { return stats_; }
  double step_size() const { return h_; }

  // Advance y from t to t_end (either direction). per_step(t, y) runs after
  // every accepted step, including the one landing exactly on t_end.
  template <class Rhs, class Cb>
  void integrate(Rhs&& rhs, double& t, State& y, double t_end, Cb&& per_step) {
    if (t == t_end) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    if (!primed_) {
      rhs(t, y, k_[0]);
      if (h_ == 0) h_ = initial_step(rhs, t, y, dir);
      primed_ = true;
    }
    if (h_ * dir <= 0) h_ = std::abs(h_) * dir;  // direction changed

    while (dir * (t_end - t) > 0) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps) {
        throw StepBudgetExceeded(t);
      }
      double h = h_;
      if (opt_.h_max > 0) h = dir * std::min(std::abs(h), opt_.h_max);
      bool last = false;
      if (dir * (t + h - t_end) >= 0) {
        h = t_end - t;
        last = true;
      }
      if (std::abs(h) < opt_.h_min && !last) throw StepUnderflow(t);

      const double err = try_step(rhs, t, y, h);
      if (std::isfinite(err) && err <= 1.0) {
        t = last ? t_end : t + h;
        y = y_new_;
        k_[0] = k_[6];  // FSAL
        ++stats_.accepted;
        const double e = std::max(err / kErrTarget, 1e-10);
        if (!last) {
          // A final step truncated to hit t_end must not shrink the
          // controller state; sampling forces many such landings.
          double fac = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev_, kBeta);
          h_ = h * std::clamp(fac, 0.2, 5.0);
        }
        err_prev_ = e;
        per_step(t, y);
      } else {
        ++stats_.rejected;
        const double e = std::isfinite(err) ? err / kErrTarget : 1e10;
        double fac = kSafety * std::pow(e, -0.2);
        h_ = h * std::clamp(fac, 0.1, 0.9);
        if (std::abs(h_) < opt_.h_min) throw StepUnderflow(t);
      }
    }
  }

  // n equal Dopri5 steps without error control (order diagnostics).
  template <class Rhs>
  void integrate_fixed(Rhs&& rhs, double& t, State& y, double t_end, long n) {
    const double h = (t_end - t) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      rhs(t, y, k_[0]);
      try_step(rhs, t, y, h);
      t += h;
      y = y_new_;
      ++stats_.accepted;
    }
    t = t_end;
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kAlpha = 0.7 / 5.0;
  static constexpr double kBeta = 0.4 / 5.0;
  // Steer the controller toward a fraction of the acceptance threshold so
  // the realized local error sits safely inside the requested tolerance.
  static constexpr double kErrTarget = 0.3;

  template <class Rhs>
  double initial_step(Rhs&& rhs, double t, const State& y, double dir) {
    const double sc = opt_.atol + opt_.rtol;
    const double d0 = rms(y) / sc;
    const double d1 = rms(k_[0]) / sc;
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 *= dir;
    State y1 = y + h0 * k_[0];
    State f1;
    rhs(t + h0, y1, f1);
    const double d2 = rms(f1 - k_[0]) / sc / std::abs(h0);
    const double dm = std::max(d1, d2);
    const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::abs(h0) * 1e3;
    return dir * std::min(100.0 * std::abs(h0), h1);
  }

  static double rms(const State& v) {
    double s = 0;
    for (int i = 0; i < v.size(); ++i) {
      const double a = std::abs(v(i));
      s += a * a;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  }

  // Returns the scaled error estimate of one trial step; fills y_new_, k_.
  template <class Rhs>
  double try_step(Rhs&& rhs, double t, const State& y, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State tmp = y + h * (a21 * k_[0]);
    rhs(t + c2 * h, tmp, k_[1]);
    tmp = y + h * (a31 * k_[0] + a32 * k_[1]);
    rhs(t + c3 * h, tmp, k_[2]);
    tmp = y + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    rhs(t + c4 * h, tmp, k_[3]);
    tmp = y + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    rhs(t + c5 * h, tmp, k_[4]);
    tmp = y + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    rhs(t + h, tmp, k_[5]);
    y_new_ = y + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
    rhs(t + h, y_new_, k_[6]);

    const State err = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] +
                           e6 * k_[5] + e7 * k_[6]);
    double acc = 0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc =
          opt_.atol + opt_.rtol * std::max(std::abs(y(i)), std::abs(y_new_(i)));
      const double q = std::abs(err(i)) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
  }

  Options opt_;
  StepStats stats_;
  State k_[7];
  State y_new_;
  double h_ = 0;
  double err_prev_ = 1.0;
  bool primed_ = false;
};

}  // namespace adlab::ode
