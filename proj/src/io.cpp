#include "adlab/io.hpp"

#include <charconv>
#include <cmath>

namespace adlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const AdiabaticFrame& frame) {
  os << "t,R,f_ad,c0sq,c1sq,dyn_phase,geo_phase,norm_err\n";
  for (size_t k = 0; k < traj.t.size(); ++k) {
    os << format_double(traj.t[k]) << ',' << format_double(traj.r[k]) << ','
       << format_double(traj.f_ad[k]) << ',' << format_double(traj.c0_sq[k]) << ','
       << format_double(traj.c1_sq[k]) << ',' << format_double(frame.dyn_phase[k]) << ','
       << format_double(frame.geo_phase[k]) << ',' << format_double(traj.norm_err[k]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "epsilon,f_min,infidelity,clamp_hits,steps\n";
  for (const auto& r : records) {
    const double f = r.failed ? std::nan("") : r.f_min;
    const double inf = r.failed ? std::nan("") : r.infidelity;
    os << format_double(r.epsilon) << ',' << format_double(f) << ',' << format_double(inf)
       << ',' << r.clamp_hits << ',' << r.steps << '\n';
  }
}

void write_scan_csv(std::ostream& os, const std::vector<ConnectionSample>& rows,
                    const SigmaEstimate* sigma) {
  os << "R,alpha00,re_alpha10,im_alpha10,beta0\n";
  for (const auto& s : rows) {
    os << format_double(s.r) << ',' << format_double(s.alpha00) << ','
       << format_double(s.alpha10.real()) << ',' << format_double(s.alpha10.imag()) << ','
       << format_double(s.beta0) << '\n';
  }
  if (sigma) {
    os << "# sigma_hat=" << format_double(sigma->sigma_hat)
       << " rms_residual=" << format_double(sigma->rms_residual) << " n=" << sigma->n_used
       << '\n';
  }
}

}  // namespace adlab
