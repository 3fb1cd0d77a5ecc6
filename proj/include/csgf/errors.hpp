#pragma once

#include <stdexcept>
#include <string>

namespace csgf {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Raised by the ODE integrator; carries the last time it reached.
struct IntegrationFailure : std::runtime_error {
  IntegrationFailure(const std::string& what, double last_time)
      : std::runtime_error(what), last_time(last_time) {}
  double last_time;
};

// A quantity that must be (numerically) real or finite was not.
struct NumericalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Divergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle truncation exceeded the configured sink-mass bound.
struct TruncationWarning : std::runtime_error {
  TruncationWarning(const std::string& what, double sink_mass)
      : std::runtime_error(what), sink_mass(sink_mass) {}
  double sink_mass;
};

}  // namespace csgf
