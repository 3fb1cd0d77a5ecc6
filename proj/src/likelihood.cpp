#include "csgf/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "csgf/errors.hpp"
#include "csgf/oracle.hpp"
#include "csgf/recovery.hpp"

namespace csgf {

namespace {

std::size_t grid_size_for(std::size_t configured, unsigned largest) {
  if (configured > largest) return configured;
  std::size_t n = 16;
  while (n <= 2u * largest) n *= 2;
  return n;
}

}  // namespace

ProbabilityGrid transition_grid(const Config& cfg, const ModelSpec& model, double t, unsigned j,
                                unsigned k, std::size_t n) {
  switch (cfg.backend) {
    case Backend::Baseline:
      return baseline_probabilities(model, t, j, k, n, cfg.baseline);
    case Backend::Csgf: {
      const std::size_t m = std::min(n, cfg.solver.m.value_or((n + 1) / 2));
      RecoveryConfig rc = cfg.solver.recovery;
      rc.lambda = resolve_lambda(cfg.solver, m);
      rc.seed = cfg.seed;
      return csgf_pipeline(model, t, j, k, n, m, rc).S_hat;
    }
    case Backend::Oracle: {
      const auto dim = static_cast<Eigen::Index>(n);
      ProbabilityGrid pg{n, t, j, k, RealGrid::Zero(dim, dim)};
      if (cfg.oracle.reps > 0) {
        const auto sim = oracle::simulate(model.rates, {j, k}, t, cfg.oracle.reps, cfg.seed);
        for (const auto& [state, count] : sim.counts)
          if (state.first < n && state.second < n)
            pg.values(state.first, state.second) =
                static_cast<double>(count) / static_cast<double>(sim.reps);
        return pg;
      }
      const auto gen = oracle::build_generator(model.rates, cfg.oracle.cap);
      const auto row = oracle::transition_row(gen, t, {j, k}, cfg.oracle.max_sink_mass);
      for (Eigen::Index l = 0; l < dim; ++l)
        for (Eigen::Index m = 0; m < dim; ++m)
          pg.values(l, m) = row.at(static_cast<unsigned>(l), static_cast<unsigned>(m));
      return pg;
    }
  }
  throw InvalidArgument("unknown back end");
}

double transition_probability(const Config& cfg, const ModelSpec& model, double t, unsigned j,
                              unsigned k, unsigned l, unsigned m, std::size_t n) {
  if (l >= n || m >= n)
    throw OutOfRange("end state (" + std::to_string(l) + ", " + std::to_string(m) +
                     ") outside the " + std::to_string(n) + "x" + std::to_string(n) + " grid");
  return transition_grid(cfg, model, t, j, k, n).values(l, m);
}

void ObservationSeries::validate() const {
  if (times.size() != states.size())
    throw InvalidArgument("observation times and states differ in length");
  if (times.size() < 2) throw InvalidArgument("need at least two observations");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw InvalidArgument("observation times must be strictly increasing");
}

ObservationSeries read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open observations file '" + path + "'");
  ObservationSeries series;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double time;
    long x1, x2;
    if (!(ss >> time >> x1 >> x2)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InvalidArgument("bad observation line: " + line);
    }
    first = false;
    if (x1 < 0 || x2 < 0) throw InvalidArgument("observed counts must be non-negative");
    series.times.push_back(time);
    series.states.emplace_back(static_cast<unsigned>(x1), static_cast<unsigned>(x2));
  }
  series.validate();
  return series;
}

LogLikelihood observed_log_likelihood(const ObservationSeries& series, const Config& cfg,
                                      const ModelSpec& model) {
  series.validate();
  LogLikelihood out;
  for (std::size_t i = 0; i + 1 < series.times.size(); ++i) {
    const auto [j, k] = series.states[i];
    const auto [l, m] = series.states[i + 1];
    const double dt = series.times[i + 1] - series.times[i];
    const std::size_t n = grid_size_for(cfg.n, std::max({j, k, l, m}));
    const double p = transition_probability(cfg, model, dt, j, k, l, m, n);

    IntervalTerm term{i, p, -std::numeric_limits<double>::infinity()};
    if (p > 0.0) {
      term.log_probability = std::log(p);
    } else {
      out.diagnostics.push_back("interval " + std::to_string(i) + ": probability " +
                                std::to_string(p) + " is not positive");
    }
    out.value += term.log_probability;
    out.terms.push_back(term);
  }
  return out;
}

}  // namespace csgf
