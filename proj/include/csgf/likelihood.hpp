#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "csgf/config.hpp"
#include "csgf/inversion.hpp"

namespace csgf {

// Grid of p_{(j,k),(l,m)}(t) for l, m < n from the configured back end.
// For the oracle the grid is the truncated-generator row restricted to the
// window (or empirical frequencies when oracle.reps > 0).
ProbabilityGrid transition_grid(const Config& cfg, const ModelSpec& model, double t, unsigned j,
                                unsigned k, std::size_t n);

// Single entry; throws OutOfRange when (l, m) lies outside the n x n window.
double transition_probability(const Config& cfg, const ModelSpec& model, double t, unsigned j,
                              unsigned k, unsigned l, unsigned m, std::size_t n);

struct ObservationSeries {
  std::vector<double> times;
  std::vector<std::pair<unsigned, unsigned>> states;

  void validate() const;
};

// Reads "time,x1,x2" lines; a header line is skipped if present.
ObservationSeries read_observations(const std::string& path);

struct IntervalTerm {
  std::size_t interval = 0;
  double probability = 0.0;
  double log_probability = 0.0;
};

struct LogLikelihood {
  double value = 0.0;
  std::vector<IntervalTerm> terms;
  std::vector<std::string> diagnostics;  // one per non-positive interval probability
};

// Sum over consecutive observations of log p_{X(t_i), X(t_{i+1})}(t_{i+1} - t_i),
// each interval computed independently. The grid size per interval is
// cfg.n or, when that is too small for the interval's counts, the next power
// of two above twice the largest count.
LogLikelihood observed_log_likelihood(const ObservationSeries& series, const Config& cfg,
                                      const ModelSpec& model);

}  // namespace csgf
