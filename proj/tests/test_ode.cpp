#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "csgf/errors.hpp"
#include "csgf/ode.hpp"

using namespace csgf;
using namespace csgf::ode;
using Complex = std::complex<double>;

namespace {

Problem decay(double mu, double t_end, Tolerances tol = {}) {
  return {[mu](double, const Eigen::VectorXcd& y) { return Eigen::VectorXcd(-mu * y); },
          Eigen::VectorXcd::Constant(1, 1.0), 0.0, t_end, tol};
}

}  // namespace

TEST_CASE("exponential decay") {
  const auto y = integrate(decay(0.147, 1.0));
  CHECK(std::abs(y[0] - std::exp(-0.147)) < 1e-9);
  CHECK(std::abs(y[0].real() - 0.8632939774) < 1e-9);
}

TEST_CASE("rotation on the unit circle") {
  Problem p{[](double, const Eigen::VectorXcd& y) {
              return Eigen::VectorXcd(Complex(0.0, 1.0) * y);
            },
            Eigen::VectorXcd::Constant(1, 1.0), 0.0, std::numbers::pi, {}};
  CHECK(std::abs(integrate(p)[0] - Complex(-1.0, 0.0)) < 1e-8);
}

TEST_CASE("zero-length integration returns the initial value exactly") {
  Problem p = decay(3.0, 0.0);
  p.y0[0] = {0.3, -0.7};
  Stats stats;
  const auto y = integrate(p, &stats);
  CHECK(y[0] == Complex(0.3, -0.7));
  CHECK(stats.rhs_evals == 0);
}

namespace {

std::vector<double> errors_under_halving(const Problem& base, Complex exact, int halvings) {
  std::vector<double> out;
  Problem p = base;
  for (int i = 0; i <= halvings; ++i) {
    out.push_back(std::abs(integrate(p)[0] - exact));
    p.tol.abs_tol *= 0.5;
    p.tol.rel_tol *= 0.5;
  }
  return out;
}

Problem rotation() {
  return {[](double, const Eigen::VectorXcd& y) {
            return Eigen::VectorXcd(Complex(0.0, 1.0) * y);
          },
          Eigen::VectorXcd::Constant(1, 1.0), 0.0, std::numbers::pi, {}};
}

}  // namespace

// Strict version. An adaptive controller can place a longer final step when
// the tolerance tightens, so single halvings may raise an already tiny error.
TEST_CASE("halving tolerances never increases the error" * doctest::may_fail()) {
  for (const auto& errs : {errors_under_halving(decay(0.147, 1.0), std::exp(-0.147), 12),
                           errors_under_halving(rotation(), -1.0, 12)})
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] <= errs[i - 1]);
}

TEST_CASE("error stays within tolerance and falls with it") {
  for (const auto& errs : {errors_under_halving(decay(0.147, 1.0), std::exp(-0.147), 12),
                           errors_under_halving(decay(5.0, 2.0), std::exp(-10.0), 12),
                           errors_under_halving(rotation(), -1.0, 12)}) {
    double tol = 1e-8;
    for (double e : errs) {
      CHECK(e < 10.0 * tol);
      tol *= 0.5;
    }
    CHECK(errs.back() < errs.front() / 100.0);
  }
}

TEST_CASE("complex system agrees with its real counterpart") {
  // y' = M y with a complex 2x2 matrix; real form has dimension 4
  Eigen::Matrix2cd M;
  M << Complex(-0.3, 0.4), Complex(0.1, 0.0), Complex(0.2, -0.5), Complex(-0.1, 0.2);
  Eigen::VectorXcd y0(2);
  y0 << Complex(0.5, 0.5), Complex(-0.2, 0.9);

  Problem complex_problem{
      [M](double, const Eigen::VectorXcd& y) { return Eigen::VectorXcd(M * y); }, y0, 0.0, 1.7,
      {}};
  RealProblem real_problem{[M](double, const Eigen::VectorXd& y) {
                             Eigen::VectorXcd z(2);
                             z << Complex(y[0], y[1]), Complex(y[2], y[3]);
                             const Eigen::VectorXcd d = M * z;
                             Eigen::VectorXd out(4);
                             out << d[0].real(), d[0].imag(), d[1].real(), d[1].imag();
                             return out;
                           },
                           Eigen::VectorXd(4), 0.0, 1.7, {}};
  real_problem.y0 << y0[0].real(), y0[0].imag(), y0[1].real(), y0[1].imag();

  Stats cs, rs;
  const auto yc = integrate(complex_problem, &cs);
  const auto yr = integrate(real_problem, &rs);
  CHECK(cs.accepted == rs.accepted);
  CHECK(std::abs(yc[0] - Complex(yr[0], yr[1])) < 1e-12);
  CHECK(std::abs(yc[1] - Complex(yr[2], yr[3])) < 1e-12);

  // and both match the matrix exponential
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> eig(M);
  const Eigen::Matrix2cd V = eig.eigenvectors();
  const Eigen::Vector2cd exp_diag = (eig.eigenvalues() * 1.7).array().exp();
  const Eigen::Vector2cd exact = V * exp_diag.asDiagonal() * V.inverse() * y0;
  CHECK((yc - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("integration failures") {
  // blow-up in finite time: y' = y^2, y(0) = 1 explodes at t = 1
  Problem blowup{[](double, const Eigen::VectorXcd& y) {
                   return Eigen::VectorXcd(y.cwiseProduct(y));
                 },
                 Eigen::VectorXcd::Constant(1, 1.0), 0.0, 2.0, {}};
  try {
    integrate(blowup);
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.last_time > 0.9);
    CHECK(e.last_time < 1.0 + 1e-6);
  }

  Problem nan_rhs{[](double t, const Eigen::VectorXcd& y) {
                    Eigen::VectorXcd d = y;
                    if (t > 0.5) d[0] = std::nan("");
                    return d;
                  },
                  Eigen::VectorXcd::Constant(1, 1.0), 0.0, 1.0, {}};
  CHECK_THROWS_AS(integrate(nan_rhs), IntegrationFailure);

  Problem backwards = decay(1.0, -1.0);
  CHECK_THROWS_AS(integrate(backwards), InvalidArgument);
  CHECK_THROWS_AS(integrate(decay(1.0, 1.0, {0.0, 1e-8})), InvalidArgument);
}

TEST_CASE("integration is deterministic") {
  const auto a = integrate(decay(0.7, 3.0));
  const auto b = integrate(decay(0.7, 3.0));
  CHECK(a[0] == b[0]);
}
