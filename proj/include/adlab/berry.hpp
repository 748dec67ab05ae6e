#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "adlab/models.hpp"

namespace adlab {

// Connection data at one point of the scan parameter: R for the rotating
// spin model, t for the counterexample (whose drive parameter is the
// vector L(t); values are contracted against dL/dt).
struct ConnectionSample {
  double r = 0;
  double alpha00 = 0;                  // ground-state diagonal connection
  std::complex<double> alpha10 = 0;    // transition connection, excited <- ground
  double beta0 = 0;                    // gradient of the ground eigenenergy
};

// Closed-form connections in the analytic gauge.
ConnectionSample connection_analytic(const ModelSpec& spec, double r);

// Centered differences of the analytic-gauge eigenvectors with one
// Richardson halving; delta = 0 selects 1e-6 * max(1, |r|). Throws
// StepTooLargeError when the two estimates disagree or the gauge rotates
// too fast across the stencil.
ConnectionSample connection_numeric(const ModelSpec& spec, double r, double delta = 0);

// Time-contracted rates entering the coefficient equation: a00 = alpha00 *
// dR/dt (or alpha00 . dL/dt), likewise a10.
struct ConnectionRates {
  double a00 = 0;
  std::complex<double> a10 = 0;
};

ConnectionRates connection_rate_at_time(const ModelSpec& spec, double t);

struct SigmaEstimate {
  double sigma_hat = 0;
  double rms_residual = 0;
  int n_used = 0;
};

// Least-squares slope of log|alpha10| against log|R|; sigma_hat is the
// negated slope. Input pairs are (R, |alpha10|).
SigmaEstimate singularity_index(const std::vector<std::pair<double, double>>& samples);

// Secular-term estimate exp(-(1/eps) |Int_0^{im_crossing} gap / g(s) ds|),
// the exponent integrated by adaptive quadrature along the imaginary
// segment. The crossing location is analytic input supplied by the caller.
double secular_bound(double gap, const std::function<double(double)>& g, double eps,
                     double im_crossing);

}  // namespace adlab
