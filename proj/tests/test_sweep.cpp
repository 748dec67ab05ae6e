#include <doctest.h>

#include <cmath>
#include <random>

#include "adlab/errors.hpp"
#include "adlab/sweep.hpp"

using namespace adlab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

ModelSpec linear_spin(double theta, FVariant f = FVariant::linear()) {
  ModelSpec s;
  s.theta = theta;
  s.omega0 = 1.0;
  s.f = f;
  s.schedule = Schedule::linear_time(0.01);
  return s;
}

SweepRecord synthetic(double eps, double infidelity) {
  SweepRecord r;
  r.epsilon = eps;
  r.infidelity = infidelity;
  r.f_min = 1.0 - infidelity;
  return r;
}

}  // namespace

TEST_CASE("uncoupled sweep has zero infidelity at every epsilon") {
  IntegratorConfig cfg;
  const auto records = run_sweep(linear_spin(0.0), {0.1, 0.05, 0.02}, cfg);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    CHECK_FALSE(r.failed);
    CHECK(r.infidelity <= 1e-12);
  }
}

TEST_CASE("linear drive infidelity follows the square law") {
  IntegratorConfig cfg;
  const auto records = run_sweep(linear_spin(kPi / 2), {0.1, 0.05}, cfg);
  REQUIRE(records.size() == 2);
  const double ratio = records[1].infidelity / records[0].infidelity;
  // exact envelope: eps^2/(1+eps^2); the ratio of the two sits near 4
  CHECK(std::abs(ratio - 4.0) < 0.1);
  // and infidelity shrinks monotonically with epsilon
  CHECK(records[0].infidelity < records[1].infidelity);
}

TEST_CASE("records come back sorted and reproducible across workers") {
  IntegratorConfig cfg;
  const std::vector<double> grid = {0.08, 0.2, 0.12};
  const auto serial = run_sweep(linear_spin(1.0), grid, cfg, 1);
  const auto parallel = run_sweep(linear_spin(1.0), grid, cfg, 3);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 1; i < serial.size(); ++i) CHECK(serial[i].epsilon > serial[i - 1].epsilon);
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].epsilon == parallel[i].epsilon);
    CHECK(serial[i].f_min == parallel[i].f_min);  // bit identical
    CHECK(serial[i].steps == parallel[i].steps);
  }
}

TEST_CASE("per-run integration failures are recorded, not fatal") {
  IntegratorConfig cfg;
  cfg.max_steps = 50;
  const auto records = run_sweep(linear_spin(1.0), {0.1, 0.01}, cfg);
  REQUIRE(records.size() == 2);
  CHECK(records[0].failed);  // the small-epsilon run exhausts the budget
  CHECK_FALSE(records[0].error.empty());
}

TEST_CASE("run_sweep validates the grid") {
  IntegratorConfig cfg;
  CHECK_THROWS_AS(run_sweep(linear_spin(1.0), {}, cfg), ConfigError);
  CHECK_THROWS_AS(run_sweep(linear_spin(1.0), {0.1, 0.1}, cfg), ConfigError);
  CHECK_THROWS_AS(run_sweep(linear_spin(1.0), {0.1, -0.2}, cfg), ConfigError);
}

TEST_CASE("fit recovers an exact power law to machine precision") {
  std::vector<SweepRecord> records;
  for (double eps : geometric_grid(1e-3, 1e-1, 8)) {
    records.push_back(synthetic(eps, 3.0 * eps * eps));
  }
  const PowerLawFit fit = fit_power_law(records);
  CHECK(std::abs(fit.slope - 2.0) <= 1e-12);
  CHECK(std::abs(fit.intercept - std::log(3.0)) <= 1e-12);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.n_points_used == 8);
  CHECK(fit.noise_floor_excluded == 0);
}

TEST_CASE("fit tolerates small multiplicative noise") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  std::vector<SweepRecord> records;
  for (double eps : geometric_grid(1e-3, 1e-1, 12)) {
    records.push_back(synthetic(eps, eps * (1.0 + noise(rng))));
  }
  const PowerLawFit fit = fit_power_law(records);
  CHECK(std::abs(fit.slope - 1.0) <= 0.02);
}

TEST_CASE("fit excludes noise-floor points and errors when too few remain") {
  std::vector<SweepRecord> records;
  for (double eps : geometric_grid(1e-3, 1e-1, 6)) {
    records.push_back(synthetic(eps, 1e-12));
  }
  CHECK_THROWS_AS(fit_power_law(records), InsufficientDataError);

  records.clear();
  for (double eps : geometric_grid(1e-2, 1e-1, 5)) {
    records.push_back(synthetic(eps, eps * eps));
  }
  records.push_back(synthetic(1e-4, 1e-11));  // below the floor
  const PowerLawFit fit = fit_power_law(records);
  CHECK(fit.noise_floor_excluded == 1);
  CHECK(fit.n_points_used == 5);
}

TEST_CASE("fit slope is scale equivariant") {
  std::vector<SweepRecord> a, b;
  for (double eps : geometric_grid(1e-3, 1e-1, 7)) {
    const double base = std::pow(eps, 1.5) * (1.0 + 0.05 * std::sin(1000 * eps));
    a.push_back(synthetic(eps, base));
    b.push_back(synthetic(eps, 17.0 * base));
  }
  const PowerLawFit fa = fit_power_law(a);
  const PowerLawFit fb = fit_power_law(b);
  CHECK(std::abs(fa.slope - fb.slope) <= 1e-12);
  CHECK(fb.intercept - fa.intercept == doctest::Approx(std::log(17.0)));
}

TEST_CASE("fit drops a contaminated largest-epsilon point") {
  std::vector<SweepRecord> records;
  for (double eps : geometric_grid(1e-3, 3e-2, 9)) {
    records.push_back(synthetic(eps, eps * eps));
  }
  records.push_back(synthetic(1e-1, 0.9));  // saturated, far off the law
  const PowerLawFit fit = fit_power_law(records);
  CHECK(fit.dropped_largest);
  CHECK(fit.n_points_used == 9);
  CHECK(std::abs(fit.slope - 2.0) <= 1e-6);
}

TEST_CASE("predicted exponents per experiment family") {
  ModelSpec regular = linear_spin(1.0);
  CHECK(predicted_exponent(regular) == 2.0);

  ModelSpec power = linear_spin(1.0, FVariant::power(0.5));
  CHECK(predicted_exponent(power) == 1.0);
  power.f = FVariant::power(0.25);
  CHECK(predicted_exponent(power) == doctest::Approx(1.5));

  ModelSpec log_case = linear_spin(1.0, FVariant::log());
  CHECK_FALSE(predicted_exponent(log_case).has_value());

  ModelSpec nl = linear_spin(1.0);
  nl.schedule = Schedule::nonlinear_time(0.01, 2.0);
  CHECK(predicted_exponent(nl) == 1.0);
  nl.schedule = Schedule::nonlinear_time(0.01, 0.5);
  CHECK(predicted_exponent(nl) == 2.0);
  nl.schedule = Schedule::nonlinear_time(0.01, 1.0);
  CHECK(predicted_exponent(nl) == 2.0);

  ModelSpec ce;
  ce.variant = ModelVariant::CounterExample;
  ce.schedule = Schedule::linear_time(1.0);
  CHECK_FALSE(predicted_exponent(ce).has_value());
}

TEST_CASE("breakdown_check verdicts") {
  // plateau well below threshold
  std::vector<SweepRecord> plateau = {synthetic(0.1, 0.5), synthetic(0.03, 0.52),
                                      synthetic(0.01, 0.49)};
  CHECK(breakdown_check(plateau) == Verdict::Breakdown);

  // power-law decay toward F = 1
  std::vector<SweepRecord> decay;
  for (double eps : geometric_grid(1e-3, 1e-1, 6)) decay.push_back(synthetic(eps, eps * eps));
  CHECK(breakdown_check(decay) == Verdict::Converging);

  // ripple that stays low counts as breakdown
  std::vector<SweepRecord> ripple = {synthetic(0.1, 0.9), synthetic(0.05, 0.7),
                                     synthetic(0.02, 0.85), synthetic(0.01, 0.72)};
  CHECK(breakdown_check(ripple) == Verdict::Breakdown);

  // too few records or too little span
  std::vector<SweepRecord> few = {synthetic(0.1, 0.5), synthetic(0.01, 0.5)};
  CHECK(breakdown_check(few) == Verdict::Inconclusive);
  std::vector<SweepRecord> narrow = {synthetic(0.1, 0.5), synthetic(0.07, 0.5),
                                     synthetic(0.05, 0.5)};
  CHECK(breakdown_check(narrow) == Verdict::Inconclusive);
}

TEST_CASE("geometric grid hits its endpoints") {
  const auto g = geometric_grid(1e-3, 1e-1, 10);
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e-1);
  for (size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(geometric_grid(-1.0, 1.0, 5), ConfigError);
}
