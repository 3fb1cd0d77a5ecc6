#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "csgf/fourier.hpp"
#include "csgf/inversion.hpp"
#include "csgf/models.hpp"

namespace csgf {

// Generating-function values at the sampled frequency pairs idx x idx, and
// the matching rows of the series basis. B = A S A^T for the true S.
struct MeasurementSet {
  std::size_t n = 0;
  IndexSet idx;
  ComplexGrid B;  // M x M
  ComplexGrid A;  // M x n
  std::size_t pgf_evals = 0;
  std::size_t ode_solves = 0;
  double eval_seconds = 0.0;
};

struct RecoveryConfig {
  double lambda = 0.0;
  // Initial step size of the line search. Non-positive selects 1/M^2.
  double initial_step = 0.0;
  // Largest step a warm-started line search may try. Non-positive selects
  // the initial step.
  double step_cap = 0.0;
  double shrink = 0.5;
  bool warm_start = true;
  std::size_t max_iters = 5000;
  double stop_tol = 1e-8;
  std::uint64_t seed = 0;
  // true: prox step taken from the momentum point Y_{k+1} (standard
  // accelerated form). false: step taken from S_k with the gradient at
  // Y_{k+1}.
  bool prox_at_momentum = true;
  std::size_t max_shrinks = 60;
};

struct RecoveryResult {
  ProbabilityGrid S_hat;
  std::vector<double> objective_trace;  // entry 0 is the objective at S = 0
  std::size_t iterations = 0;
  std::size_t pgf_evals = 0;
  std::size_t ode_solves = 0;
  double measurement_seconds = 0.0;
  double pgd_seconds = 0.0;
  double final_step = 0.0;
};

// Draws m frequencies uniformly without replacement and evaluates the
// generating function on idx x idx.
MeasurementSet sample_measurements(const ModelSpec& model, double t, unsigned j, unsigned k,
                                   std::size_t n, std::size_t m, std::uint64_t seed);

// Exact measurements of a known coefficient grid: B = A S A^T.
MeasurementSet synthetic_measurements(const RealGrid& S, IndexSet idx);

double soft_threshold(double x, double alpha);
RealGrid soft_threshold(const RealGrid& x, double alpha);

// Smooth part g(S) = 1/2 ||A S A^T - B||_F^2 and its gradient, sharing one
// forward transform.
struct SmoothEval {
  double value = 0.0;
  RealGrid gradient;
};
double smooth_value(const RealGrid& S, const MeasurementSet& ms);
SmoothEval smooth_value_and_gradient(const RealGrid& S, const MeasurementSet& ms);

// g(S) + lambda ||S||_1.
double objective(const RealGrid& S, const MeasurementSet& ms, double lambda);

// Gradient of g at S with respect to the real entries of S:
// Re(A^* (A S A^T - B) conj(A)).
RealGrid gradient(const RealGrid& S, const MeasurementSet& ms);

struct LineSearchResult {
  double step = 0.0;
  RealGrid Z;  // softh(Y - step * grad_Y, step * lambda)
  double g_Z = 0.0;
  std::size_t shrinks = 0;
};

// Backtracks step <- c * step until g(Z) <= g(Y) + <grad_Y, Z - Y> + ||Z - Y||^2 / (2 step).
// Throws StepUnderflow after max_shrinks reductions.
LineSearchResult line_search(double step, double c, const RealGrid& Y, const RealGrid& grad_Y,
                             double g_Y, const MeasurementSet& ms, double lambda,
                             std::size_t max_shrinks = 60);

// Accelerated proximal gradient recovery of the coefficient grid from a
// measurement set, starting from S = 0.
RecoveryResult recover(const MeasurementSet& ms, const RecoveryConfig& cfg);

// sample_measurements followed by recover; cfg.seed drives the sampling.
RecoveryResult csgf_pipeline(const ModelSpec& model, double t, unsigned j, unsigned k,
                             std::size_t n, std::size_t m, const RecoveryConfig& cfg);

// M = ceil(sqrt(3 K log(N^2))), clamped to [1, N].
std::size_t measurements_for_sparsity(std::size_t sparsity, std::size_t n);

enum class LambdaRule { SqrtLogM, LogM };
double default_lambda(LambdaRule rule, std::size_t m);

}  // namespace csgf
