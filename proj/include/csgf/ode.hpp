#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace csgf::ode {

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
};

// y' = rhs(t, y) over [t_start, t_end], complex state.
struct Problem {
  std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)> rhs;
  Eigen::VectorXcd y0;
  double t_start = 0.0;
  double t_end = 0.0;
  Tolerances tol;
};

// Same, real state. Complex problems are integrated component-wise on the
// real and imaginary parts, so a complex system of dimension d and its real
// counterpart of dimension 2d take identical steps.
struct RealProblem {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> rhs;
  Eigen::VectorXd y0;
  double t_start = 0.0;
  double t_end = 0.0;
  Tolerances tol;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

// Adaptive Dormand-Prince 5(4). Returns y(t_end). Throws IntegrationFailure
// (carrying the last time reached) on step-size underflow or a non-finite
// right-hand side; InvalidArgument if the problem is malformed.
Eigen::VectorXcd integrate(const Problem& problem, Stats* stats = nullptr);
Eigen::VectorXd integrate(const RealProblem& problem, Stats* stats = nullptr);

}  // namespace csgf::ode
