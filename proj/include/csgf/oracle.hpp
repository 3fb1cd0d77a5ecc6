#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "csgf/models.hpp"

namespace csgf::oracle {

using State = std::pair<unsigned, unsigned>;

// Rate matrix of the branching process restricted to [0, cap]^2, plus one
// absorbing sink that collects every jump leaving the box.
class TruncatedGenerator {
 public:
  struct Jump {
    std::size_t to;
    double rate;
  };

  TruncatedGenerator(unsigned cap, std::vector<std::vector<Jump>> jumps);

  unsigned cap() const { return cap_; }
  std::size_t num_states() const { return jumps_.size(); }  // including the sink
  std::size_t sink() const { return jumps_.size() - 1; }
  std::size_t index(unsigned x1, unsigned x2) const;
  State state(std::size_t index) const;

  const std::vector<Jump>& jumps(std::size_t from) const { return jumps_[from]; }
  // Total exit rate, i.e. minus the diagonal entry of the generator.
  double exit_rate(std::size_t from) const { return exit_[from]; }
  // Off-diagonal entry q(from, to); 0 when no jump exists.
  double rate(std::size_t from, std::size_t to) const;
  double max_exit_rate() const;

 private:
  unsigned cap_;
  std::vector<std::vector<Jump>> jumps_;
  std::vector<double> exit_;
};

// From (x1, x2) a type-1 event (k, l) fires at rate x1 a_1(k, l) and moves to
// (x1 - 1 + k, x2 + l); type-2 events likewise.
TruncatedGenerator build_generator(const TwoTypeRates& rates, unsigned cap);

struct Distribution {
  unsigned cap = 0;
  std::vector<double> probs;  // indexed by TruncatedGenerator::index
  double sink_mass = 0.0;

  double at(unsigned x1, unsigned x2) const;
  double total() const;
};

// p(t) = p(0) e^{Qt} by uniformization; the Poisson series is cut once its
// tail drops below 1e-12.
Distribution propagate(const TruncatedGenerator& gen, double t, const Distribution& initial);

// Row of e^{Qt} for the initial state. Throws TruncationWarning when the
// sink collects more than max_sink_mass.
Distribution transition_row(const TruncatedGenerator& gen, double t, State init,
                            double max_sink_mass = 1e-9);

struct SimulationResult {
  std::map<State, std::size_t> counts;
  std::size_t reps = 0;
  std::size_t exploded = 0;  // replicates aborted by the population guard

  double frequency(unsigned x1, unsigned x2) const;
};

// Exact event-driven simulation of `reps` independent trajectories.
// Replicates are grouped in fixed blocks, each with its own RNG stream
// derived from the seed, so results do not depend on the thread count.
SimulationResult simulate(const TwoTypeRates& rates, State init, double t, std::size_t reps,
                          std::uint64_t seed, std::size_t population_guard = 1'000'000);

}  // namespace csgf::oracle
