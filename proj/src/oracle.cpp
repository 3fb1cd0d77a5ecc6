#include "csgf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "csgf/errors.hpp"
#include "csgf/parallel.hpp"

namespace csgf::oracle {

TruncatedGenerator::TruncatedGenerator(unsigned cap, std::vector<std::vector<Jump>> jumps)
    : cap_(cap), jumps_(std::move(jumps)), exit_(jumps_.size(), 0.0) {
  for (std::size_t i = 0; i < jumps_.size(); ++i)
    for (const Jump& j : jumps_[i]) exit_[i] += j.rate;
}

std::size_t TruncatedGenerator::index(unsigned x1, unsigned x2) const {
  if (x1 > cap_ || x2 > cap_)
    throw OutOfRange("state (" + std::to_string(x1) + ", " + std::to_string(x2) +
                     ") outside cap " + std::to_string(cap_));
  return static_cast<std::size_t>(x1) * (cap_ + 1) + x2;
}

State TruncatedGenerator::state(std::size_t idx) const {
  if (idx >= sink()) throw OutOfRange("state index refers to the sink");
  return {static_cast<unsigned>(idx / (cap_ + 1)), static_cast<unsigned>(idx % (cap_ + 1))};
}

double TruncatedGenerator::rate(std::size_t from, std::size_t to) const {
  double r = 0.0;
  for (const Jump& j : jumps_.at(from))
    if (j.to == to) r += j.rate;
  return r;
}

double TruncatedGenerator::max_exit_rate() const {
  return exit_.empty() ? 0.0 : *std::max_element(exit_.begin(), exit_.end());
}

TruncatedGenerator build_generator(const TwoTypeRates& rates, unsigned cap) {
  if (cap < 1) throw InvalidArgument("oracle cap must be at least 1");
  rates.validate();
  const std::size_t side = cap + 1;
  const std::size_t sink = side * side;
  std::vector<std::vector<TruncatedGenerator::Jump>> jumps(sink + 1);

  for (unsigned x1 = 0; x1 <= cap; ++x1) {
    for (unsigned x2 = 0; x2 <= cap; ++x2) {
      std::map<std::size_t, double> out;
      auto add = [&](unsigned count, const RateTable& table, Offspring stay, long d1, long d2) {
        if (count == 0) return;
        for (const auto& [offspring, a] : table) {
          if (offspring == stay || a <= 0.0) continue;
          const long y1 = static_cast<long>(x1) + d1 + offspring.first;
          const long y2 = static_cast<long>(x2) + d2 + offspring.second;
          const bool inside = y1 >= 0 && y2 >= 0 && y1 <= static_cast<long>(cap) &&
                              y2 <= static_cast<long>(cap);
          const std::size_t to =
              inside ? static_cast<std::size_t>(y1) * side + static_cast<std::size_t>(y2) : sink;
          out[to] += count * a;
        }
      };
      add(x1, rates.type1, {1, 0}, -1, 0);
      add(x2, rates.type2, {0, 1}, 0, -1);
      auto& row = jumps[static_cast<std::size_t>(x1) * side + x2];
      for (const auto& [to, r] : out) row.push_back({to, r});
    }
  }
  return TruncatedGenerator(cap, std::move(jumps));
}

double Distribution::at(unsigned x1, unsigned x2) const {
  if (x1 > cap || x2 > cap) return 0.0;
  return probs[static_cast<std::size_t>(x1) * (cap + 1) + x2];
}

double Distribution::total() const {
  double s = sink_mass;
  for (double p : probs) s += p;
  return s;
}

Distribution propagate(const TruncatedGenerator& gen, double t, const Distribution& initial) {
  if (!(t >= 0.0)) throw InvalidArgument("elapsed time must be non-negative");
  const std::size_t states = gen.num_states();
  if (initial.cap != gen.cap() || initial.probs.size() != states - 1)
    throw InvalidArgument("initial distribution does not match the generator");

  std::vector<double> v(initial.probs);
  v.push_back(initial.sink_mass);

  const double lambda = gen.max_exit_rate();
  std::vector<double> acc(states, 0.0);
  if (lambda == 0.0 || t == 0.0) {
    acc = v;
  } else {
    // v_{k+1} = v_k (I + Q / lambda); result = sum_k Pois(k; lambda t) v_k.
    const double lt = lambda * t;
    double cumulative = 0.0;
    std::vector<double> next(states);
    for (std::size_t k = 0;; ++k) {
      const double w = std::exp(-lt + static_cast<double>(k) * std::log(lt) -
                                std::lgamma(static_cast<double>(k) + 1.0));
      for (std::size_t i = 0; i < states; ++i) acc[i] += w * v[i];
      cumulative += w;
      if (1.0 - cumulative < 1e-12 && static_cast<double>(k) > lt) break;
      if (k > 100000) throw NumericalInconsistency("uniformization series did not converge");

      for (std::size_t i = 0; i < states; ++i) next[i] = v[i] * (1.0 - gen.exit_rate(i) / lambda);
      for (std::size_t i = 0; i < states; ++i) {
        if (v[i] == 0.0) continue;
        for (const auto& jump : gen.jumps(i)) next[jump.to] += v[i] * jump.rate / lambda;
      }
      v.swap(next);
    }
  }

  Distribution out;
  out.cap = gen.cap();
  out.sink_mass = acc.back();
  acc.pop_back();
  out.probs = std::move(acc);
  return out;
}

Distribution transition_row(const TruncatedGenerator& gen, double t, State init,
                            double max_sink_mass) {
  Distribution start;
  start.cap = gen.cap();
  start.probs.assign(gen.num_states() - 1, 0.0);
  start.probs[gen.index(init.first, init.second)] = 1.0;
  Distribution out = propagate(gen, t, start);
  if (out.sink_mass > max_sink_mass)
    throw TruncationWarning("oracle cap " + std::to_string(gen.cap()) + " loses mass " +
                                std::to_string(out.sink_mass),
                            out.sink_mass);
  return out;
}

double SimulationResult::frequency(unsigned x1, unsigned x2) const {
  auto it = counts.find({x1, x2});
  return it == counts.end() || reps == 0
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(reps);
}

SimulationResult simulate(const TwoTypeRates& rates, State init, double t, std::size_t reps,
                          std::uint64_t seed, std::size_t population_guard) {
  if (reps == 0) throw InvalidArgument("simulation needs at least one replicate");
  if (!(t >= 0.0)) throw InvalidArgument("elapsed time must be non-negative");
  rates.validate();

  struct Event {
    long d1, d2;
    double rate;
  };
  auto events_of = [](const RateTable& table, Offspring stay, long d1, long d2) {
    std::vector<Event> events;
    for (const auto& [offspring, a] : table)
      if (offspring != stay && a > 0.0)
        events.push_back({d1 + static_cast<long>(offspring.first),
                          d2 + static_cast<long>(offspring.second), a});
    return events;
  };
  const auto events1 = events_of(rates.type1, {1, 0}, -1, 0);
  const auto events2 = events_of(rates.type2, {0, 1}, 0, -1);
  const double exit1 = -rates.alpha1();
  const double exit2 = -rates.alpha2();

  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (reps + kBlock - 1) / kBlock;
  std::vector<SimulationResult> partial(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SimulationResult& local = partial[b];
    const std::size_t count = std::min(kBlock, reps - b * kBlock);

    auto pick = [&](const std::vector<Event>& events, double total) -> const Event& {
      double target = unit(rng) * total;
      for (const Event& e : events) {
        if (target < e.rate) return e;
        target -= e.rate;
      }
      return events.back();
    };

    for (std::size_t r = 0; r < count; ++r) {
      long x1 = init.first, x2 = init.second;
      double clock = 0.0;
      bool exploded = false;
      for (;;) {
        const double r1 = static_cast<double>(x1) * exit1;
        const double r2 = static_cast<double>(x2) * exit2;
        const double total = r1 + r2;
        if (total <= 0.0) break;
        clock += -std::log1p(-unit(rng)) / total;
        if (clock > t) break;
        const bool first = unit(rng) * total < r1;
        const Event& e = first ? pick(events1, exit1) : pick(events2, exit2);
        x1 += e.d1;
        x2 += e.d2;
        if (static_cast<std::size_t>(x1 + x2) > population_guard) {
          exploded = true;
          break;
        }
      }
      ++local.reps;
      if (exploded)
        ++local.exploded;
      else
        ++local.counts[{static_cast<unsigned>(x1), static_cast<unsigned>(x2)}];
    }
  });

  SimulationResult out;
  for (const auto& p : partial) {
    out.reps += p.reps;
    out.exploded += p.exploded;
    for (const auto& [state, c] : p.counts) out.counts[state] += c;
  }
  return out;
}

}  // namespace csgf::oracle
