#pragma once

#include <stdexcept>
#include <string>

namespace adlab {

// Bad experiment parameters or malformed config document.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The analytic eigenvector gauge is ill-defined at the requested point
// (|L3| too close to 1); fall back to the generic eigensolver.
struct GaugePoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instantaneous spectrum collapsed below the usable gap.
struct DegenerateSpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Connection evaluated at a clamped / singular parameter point.
struct SingularPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-difference step too large for the local gauge variation.
struct StepTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace adlab
