#include <doctest.h>

#include <cmath>

#include "csgf/errors.hpp"
#include "csgf/models.hpp"
#include "csgf/oracle.hpp"
#include "csgf/parallel.hpp"

using namespace csgf;
using namespace csgf::oracle;

TEST_CASE("generator entries") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  const auto gen = build_generator(hsc.rates, 8);
  const auto from = gen.index(1, 0);
  CHECK(gen.rate(from, gen.index(2, 0)) == doctest::Approx(0.125));
  CHECK(gen.rate(from, gen.index(0, 1)) == doctest::Approx(0.104));
  CHECK(gen.exit_rate(from) == doctest::Approx(0.229));

  const ModelSpec bds = bds_model(0.0156, 0.00426, 0.0187);
  const auto g2 = build_generator(bds.rates, 8);
  const auto f2 = g2.index(2, 0);
  CHECK(g2.rate(f2, g2.index(2, 1)) == doctest::Approx(2 * 0.0156));
  CHECK(g2.rate(f2, g2.index(1, 1)) == doctest::Approx(2 * 0.00426));
  CHECK(g2.rate(f2, g2.index(1, 0)) == doctest::Approx(2 * 0.0187));
  CHECK(g2.exit_rate(f2) == doctest::Approx(2 * (0.0156 + 0.00426 + 0.0187)));

  // every row of the generator sums to zero
  for (std::size_t s = 0; s < gen.num_states(); ++s) {
    double out = 0.0;
    for (const auto& jump : gen.jumps(s)) out += jump.rate;
    CHECK(std::abs(out - gen.exit_rate(s)) < 1e-14);
  }
  CHECK(gen.exit_rate(gen.sink()) == 0.0);
  CHECK(gen.state(gen.index(3, 5)) == State{3, 5});
  CHECK_THROWS_AS(build_generator(hsc.rates, 0), InvalidArgument);
}

TEST_CASE("pure death row") {
  const ModelSpec death = hsc_model(0.0, 0.0, 0.147);
  const auto row = transition_row(build_generator(death.rates, 4), 1.0, {0, 1});
  CHECK(std::abs(row.at(0, 1) - std::exp(-0.147)) < 1e-10);
  CHECK(std::abs(row.at(0, 0) - (1.0 - std::exp(-0.147))) < 1e-10);
}

TEST_CASE("Chapman-Kolmogorov") {
  const ModelSpec bds = bds_model(0.0156, 0.00426, 0.0187);
  const auto gen = build_generator(bds.rates, 40);
  const auto direct = transition_row(gen, 0.7, {6, 3});
  const auto half = transition_row(gen, 0.35, {6, 3});
  const auto twice = propagate(gen, 0.35, half);
  double worst = 0.0;
  for (std::size_t s = 0; s < direct.probs.size(); ++s)
    worst = std::max(worst, std::abs(direct.probs[s] - twice.probs[s]));
  CHECK(worst < 1e-8);
  CHECK(std::abs(direct.total() + direct.sink_mass - 1.0) < 1e-10);
}

TEST_CASE("truncation is reported") {
  const ModelSpec hsc = hsc_model(0.5, 0.104, 0.05);
  const auto gen = build_generator(hsc.rates, 4);
  try {
    transition_row(gen, 10.0, {3, 0});
    FAIL("expected TruncationWarning");
  } catch (const TruncationWarning& w) {
    CHECK(w.sink_mass > 1e-9);
  }
}

TEST_CASE("simulation") {
  const ModelSpec death = hsc_model(0.0, 0.0, 0.147);
  const std::size_t reps = 20000;
  const auto sim = simulate(death.rates, {0, 1}, 1.0, reps, 7);
  const double p = std::exp(-0.147);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(reps));
  CHECK(std::abs(sim.frequency(0, 1) - p) < 4 * se);
  CHECK(sim.exploded == 0);

  // frequencies against the generator row for a branching case
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  const auto hs = simulate(hsc.rates, {2, 1}, 1.0, reps, 11);
  const auto row = transition_row(build_generator(hsc.rates, 30), 1.0, {2, 1});
  for (unsigned l = 0; l < 4; ++l)
    for (unsigned m = 0; m < 4; ++m) {
      const double q = row.at(l, m);
      const double s = std::sqrt(std::max(q * (1 - q), 1e-12) / static_cast<double>(reps));
      CHECK(std::abs(hs.frequency(l, m) - q) < 5 * s + 1e-12);
    }

  // thread count does not change the result
  const unsigned before = thread_count();
  set_thread_count(1);
  const auto serial = simulate(hsc.rates, {2, 1}, 1.0, 5000, 3);
  set_thread_count(4);
  const auto threaded = simulate(hsc.rates, {2, 1}, 1.0, 5000, 3);
  set_thread_count(before);
  CHECK(serial.counts == threaded.counts);
}
