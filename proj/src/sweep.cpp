#include "adlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "adlab/adiabatic.hpp"
#include "adlab/errors.hpp"

namespace adlab {

namespace {

SweepRecord run_single(const ModelSpec& templ, double eps, const IntegratorConfig& cfg,
                       int n_samples) {
  SweepRecord rec;
  rec.epsilon = eps;
  try {
    const ModelSpec spec = spec_for_epsilon(templ, eps);
    const auto [t0, t1] = run_interval(spec);
    const Vector2cd psi0 = ground_state_at(spec, t0);
    const Trajectory traj = propagate(spec, psi0, t0, t1, cfg, n_samples);
    const FidelityResult fid = fidelity(traj);
    rec.f_min = fid.f_min;
    rec.infidelity = std::max(0.0, 1.0 - fid.f_min);
    rec.clamp_hits = traj.diagnostics.clamp_hits;
    rec.steps = traj.diagnostics.steps_accepted;
  } catch (const IntegrationError& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.clamp_hits = e.partial.diagnostics.clamp_hits;
    rec.steps = e.partial.diagnostics.steps_accepted;
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const ModelSpec& templ, const std::vector<double>& eps_grid,
                                   const IntegratorConfig& cfg, int jobs, int n_samples) {
  templ.validate();
  cfg.validate();
  if (eps_grid.empty()) throw ConfigError("run_sweep: empty epsilon grid");
  std::set<double> unique;
  for (double e : eps_grid) {
    if (!(e > 0) || !std::isfinite(e)) throw ConfigError("run_sweep: epsilons must be positive");
    if (!unique.insert(e).second) throw ConfigError("run_sweep: epsilons must be distinct");
  }

  std::vector<SweepRecord> records(eps_grid.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < eps_grid.size(); ++i) {
      records[i] = run_single(templ, eps_grid[i], cfg, n_samples);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < eps_grid.size(); i = next.fetch_add(1)) {
        records[i] = run_single(templ, eps_grid[i], cfg, n_samples);
      }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(jobs, static_cast<int>(eps_grid.size()));
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon < b.epsilon; });
  return records;
}

PowerLawFit fit_power_law(const std::vector<SweepRecord>& records, double noise_floor) {
  std::vector<std::pair<double, double>> pts;  // (ln eps, ln infidelity)
  PowerLawFit fit;
  for (const auto& r : records) {
    if (r.failed || !std::isfinite(r.infidelity)) continue;
    if (r.infidelity <= noise_floor) {
      ++fit.noise_floor_excluded;
      continue;
    }
    pts.emplace_back(std::log(r.epsilon), std::log(r.infidelity));
  }
  if (pts.size() < 3) {
    throw InsufficientDataError("fit_power_law: need at least 3 records above the noise floor");
  }
  std::sort(pts.begin(), pts.end());

  auto ols = [](const std::vector<std::pair<double, double>>& p, PowerLawFit& out) {
    const double n = static_cast<double>(p.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : p) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ym = sy / n;
    for (const auto& [x, y] : p) {
      const double resid = y - out.slope * x - out.intercept;
      ss_res += resid * resid;
      ss_tot += (y - ym) * (y - ym);
    }
    out.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    out.n_points_used = static_cast<int>(p.size());
    return ss_res;
  };

  ols(pts, fit);
  if (pts.size() >= 4) {
    // Pre-asymptotic guard: judge the largest-epsilon point against the
    // fit of the remaining points, where it carries no leverage.
    std::vector<std::pair<double, double>> trimmed(pts.begin(), pts.end() - 1);
    PowerLawFit clean;
    clean.noise_floor_excluded = fit.noise_floor_excluded;
    const double ss_clean = ols(trimmed, clean);
    const double rms_clean = std::sqrt(ss_clean / trimmed.size());
    const auto& top = pts.back();
    const double top_resid = std::abs(top.second - clean.slope * top.first - clean.intercept);
    if (top_resid > 3.0 * rms_clean + 1e-12) {
      clean.dropped_largest = true;
      return clean;
    }
  }
  return fit;
}

std::optional<double> predicted_exponent(const ModelSpec& spec) {
  if (spec.variant == ModelVariant::CounterExample) return std::nullopt;
  if (spec.schedule.kind == Schedule::Kind::LinearTime) {
    switch (spec.f.kind) {
      case FVariant::Kind::Linear: return 2.0;
      case FVariant::Kind::Power: return 2.0 * (1.0 - spec.f.sigma);
      case FVariant::Kind::Log: return std::nullopt;  // irremovable singularity
    }
    return std::nullopt;
  }
  if (spec.f.kind != FVariant::Kind::Linear) return std::nullopt;
  const double st = spec.schedule.sigma_t;
  return st > 1.0 ? 2.0 / st : 2.0;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Breakdown: return "breakdown";
    case Verdict::Converging: return "converging";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict breakdown_check(const std::vector<SweepRecord>& records, double threshold) {
  std::vector<SweepRecord> ok;
  for (const auto& r : records) {
    if (!r.failed && std::isfinite(r.f_min)) ok.push_back(r);
  }
  std::sort(ok.begin(), ok.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon < b.epsilon; });
  if (ok.size() < 3) return Verdict::Inconclusive;
  const double eps_min = ok.front().epsilon;
  const double eps_max = ok.back().epsilon;
  if (eps_max / eps_min < 10.0 * (1.0 - 1e-12)) return Verdict::Inconclusive;

  double f_max_last_decade = 0;
  for (const auto& r : ok) {
    if (r.epsilon <= eps_min * 10.0 * (1.0 + 1e-12)) {
      f_max_last_decade = std::max(f_max_last_decade, r.f_min);
    }
  }
  return f_max_last_decade < threshold ? Verdict::Breakdown : Verdict::Converging;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) {
    throw ConfigError("geometric_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i) {
    grid[i] = std::exp(la + (lb - la) * i / (n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace adlab
