#include "csgf/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csgf/errors.hpp"

namespace csgf::ode {

namespace {

// Dormand & Prince (1980) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr std::size_t kMaxSteps = 1'000'000;

double component_sum_sq(const Eigen::VectorXd& err, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& y_new, const Tolerances& tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return sum;
}

double component_sum_sq(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y,
                        const Eigen::VectorXcd& y_new, const Tolerances& tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double s_re =
        tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i].real()), std::abs(y_new[i].real()));
    const double s_im =
        tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i].imag()), std::abs(y_new[i].imag()));
    const double r_re = err[i].real() / s_re;
    const double r_im = err[i].imag() / s_im;
    sum += r_re * r_re + r_im * r_im;
  }
  return sum;
}

template <class Vec>
double real_dimension(const Vec& v) {
  if constexpr (std::is_same_v<Vec, Eigen::VectorXcd>)
    return 2.0 * static_cast<double>(v.size());
  else
    return static_cast<double>(v.size());
}

template <class Vec, class Rhs>
Vec integrate_impl(const Rhs& rhs, const Vec& y0, double t0, double t1,
                   const Tolerances& tol, Stats* stats) {
  if (!(t1 >= t0)) throw InvalidArgument("ODE integration requires t_end >= t_start");
  if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0))
    throw InvalidArgument("ODE tolerances must be positive");
  if (!rhs) throw InvalidArgument("ODE problem has no right-hand side");
  if (t1 == t0) return y0;

  Stats local;
  Stats& st = stats ? *stats : local;
  const double dim = real_dimension(y0);

  auto eval = [&](double t, const Vec& y) {
    Vec f = rhs(t, y);
    ++st.rhs_evals;
    if (f.size() != y.size())
      throw InvalidArgument("ODE right-hand side returned wrong dimension");
    if (!f.allFinite()) throw IntegrationFailure("non-finite ODE right-hand side", t);
    return f;
  };

  double t = t0;
  Vec y = y0;
  Vec k1 = eval(t, y);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    const double d0 = std::sqrt(component_sum_sq(y, y, y, tol) / dim);
    const double d1 = std::sqrt(component_sum_sq(k1, y, y, tol) / dim);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    const Vec y1 = y + h0 * k1;
    const Vec k2 = eval(t + h0, y1);
    const double d2 = std::sqrt(component_sum_sq(Vec(k2 - k1), y, y, tol) / dim) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, t1 - t0});
  }

  for (std::size_t step = 0; step < kMaxSteps; ++step) {
    const double remaining = t1 - t;
    if (remaining <= 0.0) return y;
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationFailure("ODE step size underflow at t = " + std::to_string(t), t);

    const Vec k2 = eval(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = eval(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = eval(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = eval(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        eval(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = eval(t + h, y_new);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err_norm = std::sqrt(component_sum_sq(err, y, y_new, tol) / dim);
    if (!std::isfinite(err_norm)) throw IntegrationFailure("non-finite ODE error estimate", t);

    if (err_norm <= 1.0) {
      ++st.accepted;
      t = last ? t1 : t + h;
      y = y_new;
      k1 = k7;  // first-same-as-last
      if (last) return y;
      const double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      h *= std::clamp(factor, 0.2, 5.0);
    } else {
      ++st.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
    }
  }
  throw IntegrationFailure("ODE integration exceeded the step limit", t);
}

}  // namespace

Eigen::VectorXcd integrate(const Problem& p, Stats* stats) {
  return integrate_impl<Eigen::VectorXcd>(p.rhs, p.y0, p.t_start, p.t_end, p.tol, stats);
}

Eigen::VectorXd integrate(const RealProblem& p, Stats* stats) {
  return integrate_impl<Eigen::VectorXd>(p.rhs, p.y0, p.t_start, p.t_end, p.tol, stats);
}

}  // namespace csgf::ode
