#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlab/integrate.hpp"
#include "adlab/models.hpp"

namespace adlab {

struct SweepRecord {
  double epsilon = 0;
  double f_min = 1.0;
  double infidelity = 0;
  long clamp_hits = 0;
  long steps = 0;
  bool failed = false;
  std::string error;
};

// One propagation per epsilon over the template's fixed parameter range,
// each starting in the instantaneous ground state. Runs are independent;
// jobs > 1 distributes them over worker threads with identical results.
// Per-run integration failures are recorded, not fatal.
std::vector<SweepRecord> run_sweep(const ModelSpec& templ, const std::vector<double>& eps_grid,
                                   const IntegratorConfig& cfg, int jobs = 1,
                                   int n_samples = 4096);

struct PowerLawFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int n_points_used = 0;
  int noise_floor_excluded = 0;
  bool dropped_largest = false;  // pre-asymptotic guard fired
};

// Ordinary least squares on (ln eps, ln infidelity). Records at or below
// the noise floor are excluded and counted. The largest-eps point is
// dropped once if its residual exceeds 3x the RMS residual.
PowerLawFit fit_power_law(const std::vector<SweepRecord>& records, double noise_floor = 1e-10);

// Scaling exponent of 1 - F_min expected for the configured model, or
// nullopt where the approximation is expected to break down (irremovable
// singularity, counterexample).
std::optional<double> predicted_exponent(const ModelSpec& spec);

enum class Verdict { Breakdown, Converging, Inconclusive };

const char* to_string(Verdict v);

// Breakdown when F_min stays below the threshold across the last decade
// of epsilon. Inconclusive for fewer than 3 records or under a decade of
// span.
Verdict breakdown_check(const std::vector<SweepRecord>& records, double threshold = 0.9);

std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace adlab
