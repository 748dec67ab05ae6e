#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlab/integrate.hpp"
#include "adlab/models.hpp"

namespace adlab {

struct SweepPlan {
  std::vector<double> epsilons;
};

struct ScanPlan {
  double lo = 1e-3;
  double hi = 6.283185307179586477;
  int n_points = 60;
  bool log_spacing = true;
};

struct OutputPlan {
  std::string dir = ".";
};

struct ExperimentConfig {
  ModelSpec model;
  IntegratorConfig integrator;
  int n_samples = 4096;
  std::optional<SweepPlan> sweep;
  std::optional<ScanPlan> scan;
  OutputPlan output;
};

// Strict parsing: unknown keys are rejected, physical parameters are
// validated at load time. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization; load -> serialize -> load is the identity.
std::string serialize_config(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Scan grid used when the config has no scan block: a log grid in R for
// the rotating-spin model, a linear grid in t for the counterexample.
ScanPlan default_scan_plan(const ModelSpec& spec);

std::vector<std::string> preset_names();
std::string preset_json(const std::string& name);      // throws ConfigError on unknown
ExperimentConfig preset_config(const std::string& name);

}  // namespace adlab
