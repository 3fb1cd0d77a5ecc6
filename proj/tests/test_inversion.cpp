#include <doctest.h>

#include <cmath>

#include "csgf/errors.hpp"
#include "csgf/inversion.hpp"
#include "csgf/oracle.hpp"

using namespace csgf;

TEST_CASE("t = 0 gives a point mass at the initial state") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  const ProbabilityGrid pg = baseline_probabilities(hsc, 0.0, 2, 3, 8);
  RealGrid expected = RealGrid::Zero(8, 8);
  expected(2, 3) = 1.0;
  CHECK((pg.values - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pure death of one type-2 particle") {
  const ModelSpec m = hsc_model(0.0, 0.0, 0.147);
  const ProbabilityGrid pg = baseline_probabilities(m, 1.0, 0, 1, 8);
  CHECK(std::abs(pg.values(0, 1) - std::exp(-0.147)) < 1e-12);
  CHECK(std::abs(pg.values(0, 0) - (1.0 - std::exp(-0.147))) < 1e-12);
  CHECK(std::abs(pg.values(0, 1) - 0.863294) < 1e-6);
  CHECK(std::abs(pg.values(0, 0) - 0.136706) < 1e-6);
  CHECK(std::abs(pg.sum() - 1.0) < 1e-12);
  CHECK(truncation_mass(pg) < 1e-12);
}

TEST_CASE("symmetry shortcut does not change the result") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  PgfGrid with, without;
  const auto a = baseline_probabilities(hsc, 1.0, 3, 2, 16, {true}, &with);
  const auto b = baseline_probabilities(hsc, 1.0, 3, 2, 16, {false}, &without);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(without.pgf_evals == 256);
  CHECK(with.pgf_evals < 256);
  CHECK(with.pgf_evals >= 128);
}

TEST_CASE("inversion matches the truncated-generator oracle") {
  struct Case {
    ModelSpec model;
    double t;
    unsigned j, k;
  };
  const Case cases[] = {{hsc_model(0.125, 0.104, 0.147), 1.0, 1, 0},
                        {hsc_model(0.125, 0.104, 0.147), 1.0, 4, 3},
                        {bds_model(0.0156, 0.00426, 0.0187), 0.35, 6, 0},
                        {bds_model(0.0156, 0.00426, 0.0187), 0.35, 5, 9}};
  for (const Case& c : cases) {
    const ProbabilityGrid pg = baseline_probabilities(c.model, c.t, c.j, c.k, 32);
    const auto gen = oracle::build_generator(c.model.rates, 40);
    const auto row = oracle::transition_row(gen, c.t, {c.j, c.k});
    double worst = 0.0;
    for (unsigned l = 0; l < 32; ++l)
      for (unsigned m = 0; m < 32; ++m) worst = std::max(worst, std::abs(pg.values(l, m) - row.at(l, m)));
    CHECK(worst < 1e-6);
    CHECK(std::abs(pg.sum() - 1.0) < 1e-8);
    CHECK(pg.values.minCoeff() > -1e-10);
  }
}

TEST_CASE("doubling the window leaves captured entries unchanged") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  const auto small = baseline_probabilities(hsc, 1.0, 3, 3, 16);
  const auto large = baseline_probabilities(hsc, 1.0, 3, 3, 32);
  CHECK((small.values - large.values.topLeftCorner(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("aliasing shows up as truncation when the window is too small") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  const auto small = baseline_probabilities(hsc, 6.0, 6, 0, 8);
  const auto large = baseline_probabilities(hsc, 6.0, 6, 0, 64);
  // aliased mass folds back into the small window, so the entries differ
  CHECK((small.values - large.values.topLeftCorner(8, 8)).cwiseAbs().maxCoeff() > 1e-4);
  CHECK(truncation_mass(large) < 1e-8);
}

TEST_CASE("argument and consistency checks") {
  const ModelSpec hsc = hsc_model(0.125, 0.104, 0.147);
  CHECK_THROWS_AS(full_pgf_grid(hsc, 1.0, 8, 0, 8), InvalidArgument);
  ComplexGrid bad = ComplexGrid::Ones(4, 4);
  bad(1, 2) = Complex(0.0, 0.5);
  CHECK_THROWS_AS(invert_full(bad), NumericalInconsistency);
  CHECK(std::abs(unit_root(1, 4) - Complex(0.0, 1.0)) < 1e-15);
}
