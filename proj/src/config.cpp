#include "adlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adlab/errors.hpp"
#include "adlab/sweep.hpp"

namespace adlab {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : allowed) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + ctx);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
  return obj[key].get<double>();
}

FVariant parse_f(const json& j) {
  check_keys(j, {"variant", "sigma"}, "model.f");
  const std::string v = j.value("variant", "linear");
  if (v == "linear") return FVariant::linear();
  if (v == "log") return FVariant::log();
  if (v == "power") {
    if (!j.contains("sigma")) throw ConfigError("config: f power variant needs sigma");
    return FVariant::power(j["sigma"].get<double>());
  }
  throw ConfigError("config: unknown f variant '" + v + "'");
}

Schedule parse_schedule(const json& j) {
  check_keys(j, {"variant", "omega", "epsilon", "sigma_t"}, "model.schedule");
  const std::string v = j.value("variant", "linear_time");
  if (v == "linear_time") {
    return Schedule::linear_time(get_number(j, "omega", 0.01));
  }
  if (v == "nonlinear_time") {
    return Schedule::nonlinear_time(get_number(j, "epsilon", 0.01),
                                    get_number(j, "sigma_t", 2.0));
  }
  throw ConfigError("config: unknown schedule variant '" + v + "'");
}

ModelSpec parse_model(const json& j) {
  check_keys(j,
             {"variant", "theta", "omega0", "f", "schedule", "sign_flip", "r_range", "t_range",
              "r_clamp"},
             "model");
  ModelSpec m;
  const std::string v = j.value("variant", "spin_rotating");
  if (v == "spin_rotating") {
    m.variant = ModelVariant::SpinRotating;
  } else if (v == "counterexample") {
    m.variant = ModelVariant::CounterExample;
  } else {
    throw ConfigError("config: unknown model variant '" + v + "'");
  }
  m.theta = get_number(j, "theta", m.theta);
  m.omega0 = get_number(j, "omega0", m.omega0);
  if (j.contains("f")) m.f = parse_f(j["f"]);
  if (j.contains("schedule")) m.schedule = parse_schedule(j["schedule"]);
  if (j.contains("sign_flip")) {
    if (!j["sign_flip"].is_boolean()) throw ConfigError("config: sign_flip must be a boolean");
    m.sign_flip = j["sign_flip"].get<bool>();
  }
  auto parse_range = [&](const char* key, std::array<double, 2>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array() || j[key].size() != 2) {
      throw ConfigError(std::string("config: ") + key + " must be [lo, hi]");
    }
    out = {j[key][0].get<double>(), j[key][1].get<double>()};
  };
  parse_range("r_range", m.r_range);
  parse_range("t_range", m.t_range);
  m.r_clamp = get_number(j, "r_clamp", m.r_clamp);
  return m;
}

IntegratorConfig parse_integrator(const json& j) {
  check_keys(j, {"rtol", "atol", "h_init", "h_min", "max_steps", "renorm"}, "integrator");
  IntegratorConfig c;
  c.rtol = get_number(j, "rtol", c.rtol);
  c.atol = get_number(j, "atol", c.atol);
  c.h_init = get_number(j, "h_init", c.h_init);
  c.h_min = get_number(j, "h_min", c.h_min);
  if (j.contains("max_steps")) c.max_steps = j["max_steps"].get<long>();
  if (j.contains("renorm")) {
    if (!j["renorm"].is_boolean()) throw ConfigError("config: renorm must be a boolean");
    c.renorm = j["renorm"].get<bool>();
  }
  return c;
}

SweepPlan parse_sweep(const json& j) {
  check_keys(j, {"epsilons", "eps_min", "eps_max", "n_points"}, "sweep");
  SweepPlan plan;
  if (j.contains("epsilons")) {
    if (j.contains("eps_min") || j.contains("eps_max") || j.contains("n_points")) {
      throw ConfigError("config: sweep takes either epsilons or a geometric range, not both");
    }
    for (const auto& e : j["epsilons"]) plan.epsilons.push_back(e.get<double>());
  } else {
    if (!j.contains("eps_min") || !j.contains("eps_max")) {
      throw ConfigError("config: sweep needs epsilons or eps_min/eps_max");
    }
    const int n = j.value("n_points", 10);
    plan.epsilons = geometric_grid(j["eps_min"].get<double>(), j["eps_max"].get<double>(), n);
  }
  if (plan.epsilons.empty()) throw ConfigError("config: sweep epsilon grid is empty");
  for (double e : plan.epsilons) {
    if (!(e > 0) || !std::isfinite(e)) throw ConfigError("config: sweep epsilons must be positive");
  }
  return plan;
}

ScanPlan parse_scan(const json& j) {
  check_keys(j, {"lo", "hi", "n_points", "log_spacing"}, "scan");
  ScanPlan plan;
  plan.lo = get_number(j, "lo", plan.lo);
  plan.hi = get_number(j, "hi", plan.hi);
  if (j.contains("n_points")) plan.n_points = j["n_points"].get<int>();
  if (j.contains("log_spacing")) plan.log_spacing = j["log_spacing"].get<bool>();
  if (!(plan.lo < plan.hi)) throw ConfigError("config: scan needs lo < hi");
  if (plan.n_points < 2) throw ConfigError("config: scan needs at least 2 points");
  if (plan.log_spacing && !(plan.lo > 0)) {
    throw ConfigError("config: log-spaced scan needs lo > 0");
  }
  return plan;
}

json f_to_json(const FVariant& f) {
  json j;
  j["variant"] = to_string(f.kind);
  if (f.kind == FVariant::Kind::Power) j["sigma"] = f.sigma;
  return j;
}

json schedule_to_json(const Schedule& s) {
  json j;
  j["variant"] = to_string(s.kind);
  if (s.kind == Schedule::Kind::LinearTime) {
    j["omega"] = s.omega;
  } else {
    j["epsilon"] = s.epsilon;
    j["sigma_t"] = s.sigma_t;
  }
  return j;
}

json model_to_json(const ModelSpec& m) {
  json j;
  j["variant"] = to_string(m.variant);
  j["theta"] = m.theta;
  j["omega0"] = m.omega0;
  if (m.variant == ModelVariant::SpinRotating) {
    j["f"] = f_to_json(m.f);
  }
  j["schedule"] = schedule_to_json(m.schedule);
  if (m.variant == ModelVariant::CounterExample) {
    j["sign_flip"] = m.sign_flip;
    j["t_range"] = {m.t_range[0], m.t_range[1]};
  } else {
    j["r_range"] = {m.r_range[0], m.r_range[1]};
  }
  j["r_clamp"] = m.r_clamp;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
  check_keys(j, {"model", "integrator", "samples", "sweep", "scan", "output"}, "document root");

  ExperimentConfig cfg;
  try {
    if (j.contains("model")) cfg.model = parse_model(j["model"]);
    if (j.contains("integrator")) cfg.integrator = parse_integrator(j["integrator"]);
    if (j.contains("samples")) cfg.n_samples = j["samples"].get<int>();
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j["sweep"]);
    if (j.contains("scan")) cfg.scan = parse_scan(j["scan"]);
    if (j.contains("output")) {
      check_keys(j["output"], {"dir"}, "output");
      cfg.output.dir = j["output"].value("dir", ".");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.n_samples < 2) throw ConfigError("config: samples must be at least 2");
  cfg.model.validate();
  cfg.integrator.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["model"] = model_to_json(cfg.model);
  json ji;
  ji["rtol"] = cfg.integrator.rtol;
  ji["atol"] = cfg.integrator.atol;
  ji["h_init"] = cfg.integrator.h_init;
  ji["h_min"] = cfg.integrator.h_min;
  ji["max_steps"] = cfg.integrator.max_steps;
  ji["renorm"] = cfg.integrator.renorm;
  j["integrator"] = ji;
  j["samples"] = cfg.n_samples;
  if (cfg.sweep) {
    j["sweep"] = json{{"epsilons", cfg.sweep->epsilons}};
  }
  if (cfg.scan) {
    j["scan"] = json{{"lo", cfg.scan->lo},
                     {"hi", cfg.scan->hi},
                     {"n_points", cfg.scan->n_points},
                     {"log_spacing", cfg.scan->log_spacing}};
  }
  j["output"] = json{{"dir", cfg.output.dir}};
  return j.dump(2) + "\n";
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

ScanPlan default_scan_plan(const ModelSpec& spec) {
  ScanPlan plan;
  if (spec.variant == ModelVariant::SpinRotating) {
    plan.lo = 1e-3;
    plan.hi = spec.r_range[1];
    plan.n_points = 60;
    plan.log_spacing = true;
  } else {
    plan.lo = spec.t_range[0];
    plan.hi = spec.t_range[1];
    plan.n_points = 200;
    plan.log_spacing = false;
  }
  return plan;
}

namespace {

struct Preset {
  const char* name;
  const char* text;
};

// Fidelity evolution, no singularity.
constexpr const char* kFig3a = R"({
  "model": {
    "variant": "spin_rotating",
    "theta": 0.7853981633974483,
    "omega0": 1.0,
    "f": {"variant": "linear"},
    "schedule": {"variant": "linear_time", "omega": 0.05},
    "r_range": [-6.283185307179586, 6.283185307179586]
  }
})";

// Fidelity evolution across a removable connection singularity.
constexpr const char* kFig3b = R"({
  "model": {
    "variant": "spin_rotating",
    "theta": 0.7853981633974483,
    "omega0": 1.0,
    "f": {"variant": "power", "sigma": 0.5},
    "schedule": {"variant": "linear_time", "omega": 0.05},
    "r_range": [-6.283185307179586, 6.283185307179586]
  }
})";

// Minimum-fidelity sweep, removable singularity.
constexpr const char* kFig4a = R"({
  "model": {
    "variant": "spin_rotating",
    "theta": 0.7853981633974483,
    "omega0": 1.0,
    "f": {"variant": "power", "sigma": 0.5},
    "schedule": {"variant": "linear_time", "omega": 0.01},
    "r_range": [-6.283185307179586, 6.283185307179586]
  },
  "sweep": {"eps_min": 1e-3, "eps_max": 1e-1, "n_points": 10}
})";

// Minimum-fidelity sweep, irremovable (logarithmic) singularity.
constexpr const char* kFig4b = R"({
  "model": {
    "variant": "spin_rotating",
    "theta": 0.7853981633974483,
    "omega0": 1.0,
    "f": {"variant": "log"},
    "schedule": {"variant": "linear_time", "omega": 0.01},
    "r_range": [-6.283185307179586, 6.283185307179586]
  },
  "sweep": {"eps_min": 1e-3, "eps_max": 1e-1, "n_points": 10}
})";

// Nonlinear drive schedule.
constexpr const char* kFig5 = R"({
  "model": {
    "variant": "spin_rotating",
    "theta": 0.7853981633974483,
    "omega0": 1.0,
    "f": {"variant": "linear"},
    "schedule": {"variant": "nonlinear_time", "epsilon": 0.01, "sigma_t": 2.0},
    "r_range": [-6.283185307179586, 6.283185307179586]
  },
  "sweep": {"eps_min": 3e-3, "eps_max": 1e-1, "n_points": 8}
})";

constexpr Preset kPresets[] = {
    {"fig3a", kFig3a}, {"fig3b", kFig3b}, {"fig4a", kFig4a}, {"fig4b", kFig4b}, {"fig5", kFig5}};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.push_back(p.name);
  return names;
}

std::string preset_json(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.text;
  }
  throw ConfigError("config: unknown preset '" + name + "'");
}

ExperimentConfig preset_config(const std::string& name) {
  return parse_config(preset_json(name));
}

}  // namespace adlab
