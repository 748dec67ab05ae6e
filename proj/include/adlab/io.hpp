#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "adlab/adiabatic.hpp"
#include "adlab/berry.hpp"
#include "adlab/integrate.hpp"
#include "adlab/sweep.hpp"

namespace adlab {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

// Columns: t,R,f_ad,c0sq,c1sq,dyn_phase,geo_phase,norm_err
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const AdiabaticFrame& frame);

// Columns: epsilon,f_min,infidelity,clamp_hits,steps
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);

// Columns: R,alpha00,re_alpha10,im_alpha10,beta0; failed rows carry NaN.
// A footer comment records the estimated singularity index when present.
void write_scan_csv(std::ostream& os, const std::vector<ConnectionSample>& rows,
                    const SigmaEstimate* sigma);

}  // namespace adlab
