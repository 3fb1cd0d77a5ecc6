#include "csgf/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "csgf/errors.hpp"
#include "csgf/parallel.hpp"

namespace csgf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_shape(const RealGrid& S, const MeasurementSet& ms) {
  const auto n = static_cast<Eigen::Index>(ms.n);
  if (S.rows() != n || S.cols() != n)
    throw InvalidArgument("coefficient grid is " + std::to_string(S.rows()) + "x" +
                          std::to_string(S.cols()) + ", measurements expect " +
                          std::to_string(ms.n) + "x" + std::to_string(ms.n));
  const auto m = static_cast<Eigen::Index>(ms.idx.size());
  if (ms.B.rows() != m || ms.B.cols() != m)
    throw InvalidArgument("measurement grid does not match the index set");
}

// A S A^T - B, read off the full forward transform at idx x idx.
ComplexGrid residual(const RealGrid& S, const MeasurementSet& ms) {
  const ComplexGrid full = forward_series_transform(S);
  const auto m = static_cast<Eigen::Index>(ms.idx.size());
  ComplexGrid r(m, m);
  for (Eigen::Index u = 0; u < m; ++u)
    for (Eigen::Index v = 0; v < m; ++v)
      r(u, v) = full(static_cast<Eigen::Index>(ms.idx.indices[static_cast<std::size_t>(u)]),
                     static_cast<Eigen::Index>(ms.idx.indices[static_cast<std::size_t>(v)])) -
                ms.B(u, v);
  return r;
}

// Re(A^* R conj(A)) via the adjoint transform of R scattered onto idx x idx.
RealGrid adjoint_of_residual(const ComplexGrid& r, const MeasurementSet& ms) {
  const auto n = static_cast<Eigen::Index>(ms.n);
  ComplexGrid scattered = ComplexGrid::Zero(n, n);
  for (Eigen::Index u = 0; u < r.rows(); ++u)
    for (Eigen::Index v = 0; v < r.cols(); ++v)
      scattered(static_cast<Eigen::Index>(ms.idx.indices[static_cast<std::size_t>(u)]),
                static_cast<Eigen::Index>(ms.idx.indices[static_cast<std::size_t>(v)])) = r(u, v);
  return adjoint_series_transform(scattered).real();
}

double l1_norm(const RealGrid& S) { return S.cwiseAbs().sum(); }

}  // namespace

MeasurementSet sample_measurements(const ModelSpec& model, double t, unsigned j, unsigned k,
                                   std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n <= j || n <= k)
    throw InvalidArgument("grid size n = " + std::to_string(n) + " must exceed the initial counts");
  if (m == 0 || m > n)
    throw InvalidArgument("measurement size m = " + std::to_string(m) + " must lie in [1, n]");

  const auto start = Clock::now();
  MeasurementSet ms;
  ms.n = n;
  ms.idx = draw_index_set(n, m, seed);
  ms.A = partial_rows(series_basis(n), ms.idx);

  const auto dim = static_cast<Eigen::Index>(m);
  ms.B.resize(dim, dim);
  std::vector<std::size_t> solves(m * m, 0);
  parallel_for(m * m, [&](std::size_t p) {
    const std::size_t u = p / m, v = p % m;
    const PgfQuery q{t, j, k, unit_root(ms.idx.indices[u], n), unit_root(ms.idx.indices[v], n)};
    ms.B(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
        pgf_eval(model, q, &solves[p]);
  });
  ms.pgf_evals = m * m;
  for (auto s : solves) ms.ode_solves += s;
  require_finite(ms.B, "measurement grid");
  ms.eval_seconds = seconds_since(start);
  return ms;
}

MeasurementSet synthetic_measurements(const RealGrid& S, IndexSet idx) {
  if (S.rows() != S.cols()) throw InvalidArgument("coefficient grid must be square");
  idx.n = static_cast<std::size_t>(S.rows());
  validate(idx);
  MeasurementSet ms;
  ms.n = idx.n;
  ms.A = partial_rows(series_basis(ms.n), idx);
  const ComplexGrid full = forward_series_transform(S);
  const auto m = static_cast<Eigen::Index>(idx.size());
  ms.B.resize(m, m);
  for (Eigen::Index u = 0; u < m; ++u)
    for (Eigen::Index v = 0; v < m; ++v)
      ms.B(u, v) = full(static_cast<Eigen::Index>(idx.indices[static_cast<std::size_t>(u)]),
                        static_cast<Eigen::Index>(idx.indices[static_cast<std::size_t>(v)]));
  ms.idx = std::move(idx);
  return ms;
}

double soft_threshold(double x, double alpha) {
  if (x > alpha) return x - alpha;
  if (x < -alpha) return x + alpha;
  return 0.0;
}

RealGrid soft_threshold(const RealGrid& x, double alpha) {
  if (alpha < 0.0) throw InvalidArgument("soft-threshold level must be non-negative");
  return x.unaryExpr([alpha](double v) { return soft_threshold(v, alpha); });
}

double smooth_value(const RealGrid& S, const MeasurementSet& ms) {
  require_shape(S, ms);
  return 0.5 * residual(S, ms).squaredNorm();
}

SmoothEval smooth_value_and_gradient(const RealGrid& S, const MeasurementSet& ms) {
  require_shape(S, ms);
  const ComplexGrid r = residual(S, ms);
  return {0.5 * r.squaredNorm(), adjoint_of_residual(r, ms)};
}

double objective(const RealGrid& S, const MeasurementSet& ms, double lambda) {
  return smooth_value(S, ms) + lambda * l1_norm(S);
}

RealGrid gradient(const RealGrid& S, const MeasurementSet& ms) {
  return smooth_value_and_gradient(S, ms).gradient;
}

LineSearchResult line_search(double step, double c, const RealGrid& Y, const RealGrid& grad_Y,
                             double g_Y, const MeasurementSet& ms, double lambda,
                             std::size_t max_shrinks) {
  if (!(step > 0.0)) throw InvalidArgument("line search needs a positive initial step");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("line search shrink factor must be in (0, 1)");

  LineSearchResult out;
  for (out.shrinks = 0;; ++out.shrinks) {
    out.step = step;
    out.Z = soft_threshold(RealGrid(Y - step * grad_Y), step * lambda);
    out.g_Z = smooth_value(out.Z, ms);
    const RealGrid diff = out.Z - Y;
    const double bound = g_Y + grad_Y.cwiseProduct(diff).sum() + diff.squaredNorm() / (2.0 * step);
    // relative slack absorbs rounding when Z == Y
    if (out.g_Z <= bound + 1e-12 * std::max(1.0, std::abs(bound))) return out;
    if (out.shrinks >= max_shrinks)
      throw StepUnderflow("line search did not find a step after " +
                          std::to_string(max_shrinks) + " reductions");
    step *= c;
  }
}

RecoveryResult recover(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  if (cfg.lambda < 0.0 || !std::isfinite(cfg.lambda))
    throw InvalidArgument("lambda must be finite and non-negative");
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0))
    throw InvalidArgument("shrink factor must be in (0, 1)");
  const auto m = static_cast<double>(ms.idx.size());
  const double initial_step = cfg.initial_step > 0.0 ? cfg.initial_step : 1.0 / (m * m);
  const double step_cap = cfg.step_cap > 0.0 ? cfg.step_cap : initial_step;

  const auto start = Clock::now();
  const auto dim = static_cast<Eigen::Index>(ms.n);
  RealGrid S = RealGrid::Zero(dim, dim);
  RealGrid S_prev = S;

  RecoveryResult result;
  result.objective_trace.push_back(objective(S, ms, cfg.lambda));
  double step = initial_step;

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    const double omega = static_cast<double>(k) / static_cast<double>(k + 3);
    const RealGrid Y = S + omega * (S - S_prev);
    const SmoothEval at_Y = smooth_value_and_gradient(Y, ms);

    const double trial = cfg.warm_start ? std::min(step / cfg.shrink, step_cap) : initial_step;
    LineSearchResult ls =
        line_search(trial, cfg.shrink, Y, at_Y.gradient, at_Y.value, ms, cfg.lambda,
                    cfg.max_shrinks);
    step = ls.step;

    RealGrid S_next;
    double g_next;
    if (cfg.prox_at_momentum) {
      S_next = std::move(ls.Z);
      g_next = ls.g_Z;
    } else {
      S_next = soft_threshold(RealGrid(S - step * at_Y.gradient), step * cfg.lambda);
      g_next = smooth_value(S_next, ms);
    }
    const double obj = g_next + cfg.lambda * l1_norm(S_next);
    if (!std::isfinite(obj))
      throw Divergence("objective became non-finite at iteration " + std::to_string(k));

    const double prev = result.objective_trace.back();
    result.objective_trace.push_back(obj);
    result.iterations = k;
    S_prev = std::move(S);
    S = std::move(S_next);
    if (std::abs(obj - prev) / std::max(prev, 1e-12) < cfg.stop_tol) break;
  }

  result.pgd_seconds = seconds_since(start);
  result.final_step = step;
  result.S_hat = ProbabilityGrid{ms.n, 0.0, 0, 0, std::move(S)};
  result.pgf_evals = ms.pgf_evals;
  result.ode_solves = ms.ode_solves;
  result.measurement_seconds = ms.eval_seconds;
  return result;
}

RecoveryResult csgf_pipeline(const ModelSpec& model, double t, unsigned j, unsigned k,
                             std::size_t n, std::size_t m, const RecoveryConfig& cfg) {
  const MeasurementSet ms = sample_measurements(model, t, j, k, n, m, cfg.seed);
  RecoveryResult result = recover(ms, cfg);
  result.S_hat.t = t;
  result.S_hat.j = j;
  result.S_hat.k = k;
  return result;
}

std::size_t measurements_for_sparsity(std::size_t sparsity, std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const double nn = static_cast<double>(n);
  const double m = std::ceil(std::sqrt(3.0 * static_cast<double>(sparsity) * std::log(nn * nn)));
  return std::clamp<std::size_t>(static_cast<std::size_t>(m), 1, n);
}

double default_lambda(LambdaRule rule, std::size_t m) {
  const double log_m = std::log(static_cast<double>(m));
  return rule == LambdaRule::LogM ? log_m : std::sqrt(log_m);
}

}  // namespace csgf
