#include "csgf/models.hpp"

#include <cmath>
#include <string>

#include "csgf/errors.hpp"

namespace csgf {

namespace {

constexpr Offspring kStay1{1, 0};
constexpr Offspring kStay2{0, 1};

double row_sum(const RateTable& table) {
  double sum = 0.0;
  for (const auto& [offspring, rate] : table) sum += rate;
  return sum;
}

double row_scale(const RateTable& table) {
  double scale = 0.0;
  for (const auto& [offspring, rate] : table) scale += std::abs(rate);
  return scale;
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw InvalidArgument(std::string(name) + " must be a finite non-negative rate");
}

// expm1(x)/x, continuous at 0.
double relative_expm1(double x) {
  if (std::abs(x) < 1e-300) return 1.0;
  return std::expm1(x) / x;
}

}  // namespace

TwoTypeRates TwoTypeRates::from_events(RateTable type1_events, RateTable type2_events) {
  type1_events.erase(kStay1);
  type2_events.erase(kStay2);
  TwoTypeRates rates{std::move(type1_events), std::move(type2_events)};
  rates.type1[kStay1] = -row_sum(rates.type1);
  rates.type2[kStay2] = -row_sum(rates.type2);
  return rates;
}

double TwoTypeRates::alpha1() const {
  auto it = type1.find(kStay1);
  return it == type1.end() ? 0.0 : it->second;
}

double TwoTypeRates::alpha2() const {
  auto it = type2.find(kStay2);
  return it == type2.end() ? 0.0 : it->second;
}

const RateTable& TwoTypeRates::table(int type_index) const {
  if (type_index == 1) return type1;
  if (type_index == 2) return type2;
  throw InvalidArgument("particle type must be 1 or 2");
}

void TwoTypeRates::validate() const {
  for (int type = 1; type <= 2; ++type) {
    const RateTable& tab = table(type);
    const Offspring stay = type == 1 ? kStay1 : kStay2;
    for (const auto& [offspring, rate] : tab) {
      if (!std::isfinite(rate))
        throw InvalidArgument("non-finite rate for type " + std::to_string(type));
      if (offspring == stay) {
        if (rate > 0.0)
          throw InvalidArgument("no-event rate alpha_" + std::to_string(type) + " must be <= 0");
      } else if (rate < 0.0) {
        throw InvalidArgument("negative event rate a_" + std::to_string(type) + "(" +
                              std::to_string(offspring.first) + "," +
                              std::to_string(offspring.second) + ")");
      }
    }
    if (std::abs(row_sum(tab)) > 1e-12 * std::max(1.0, row_scale(tab)))
      throw InvalidArgument("rates of type " + std::to_string(type) + " do not sum to zero");
  }
}

Complex integer_power(Complex z, unsigned p) {
  Complex result{1.0, 0.0};
  while (p > 0) {
    if (p & 1u) result *= z;
    z *= z;
    p >>= 1u;
  }
  return result;
}

Complex pseudo_gf(const TwoTypeRates& rates, int type_index, Complex s1, Complex s2) {
  Complex sum{0.0, 0.0};
  for (const auto& [offspring, rate] : rates.table(type_index)) {
    if (rate == 0.0) continue;
    sum += rate * integer_power(s1, offspring.first) * integer_power(s2, offspring.second);
  }
  return sum;
}

BackwardRhs backward_rhs(const TwoTypeRates& rates) {
  return [rates](double, const Eigen::VectorXcd& phi) {
    Eigen::VectorXcd d(2);
    d[0] = pseudo_gf(rates, 1, phi[0], phi[1]);
    d[1] = pseudo_gf(rates, 2, phi[0], phi[1]);
    return d;
  };
}

BackwardRhs reduced_backward_rhs(const ModelSpec& model, Complex s1, Complex s2) {
  if (!model.closed_form_phi2)
    throw InvalidArgument("model '" + model.name + "' has no closed-form phi_2");
  return [rates = model.rates, phi2 = model.closed_form_phi2, s1, s2](
             double t, const Eigen::VectorXcd& phi) {
    Eigen::VectorXcd d(1);
    d[0] = pseudo_gf(rates, 1, phi[0], phi2(t, s1, s2));
    return d;
  };
}

std::pair<Complex, Complex> single_particle_pgfs(const ModelSpec& model, double t, Complex s1,
                                                 Complex s2, bool need_phi1,
                                                 std::size_t* ode_solves) {
  if (model.closed_form_phi2) {
    const Complex phi2 = model.closed_form_phi2(t, s1, s2);
    if (!need_phi1 || t == 0.0) return {need_phi1 ? s1 : Complex{}, phi2};
    ode::Problem problem{reduced_backward_rhs(model, s1, s2), Eigen::VectorXcd::Constant(1, s1),
                         0.0, t, model.tolerances};
    const Eigen::VectorXcd end = ode::integrate(problem);
    if (ode_solves) ++*ode_solves;
    return {end[0], phi2};
  }
  if (t == 0.0) return {s1, s2};
  Eigen::VectorXcd y0(2);
  y0 << s1, s2;
  ode::Problem problem{backward_rhs(model.rates), y0, 0.0, t, model.tolerances};
  const Eigen::VectorXcd end = ode::integrate(problem);
  if (ode_solves) ++*ode_solves;
  return {end[0], end[1]};
}

Complex pgf_eval(const ModelSpec& model, const PgfQuery& q, std::size_t* ode_solves) {
  constexpr double kUnitSlack = 1e-12;
  if (!(q.t >= 0.0) || !std::isfinite(q.t))
    throw InvalidArgument("PGF query time must be finite and non-negative");
  if (std::abs(q.s1) > 1.0 + kUnitSlack || std::abs(q.s2) > 1.0 + kUnitSlack)
    throw InvalidArgument("PGF arguments must lie in the closed unit disk");
  if (q.j == 0 && q.k == 0) return {1.0, 0.0};
  const auto [phi1, phi2] = single_particle_pgfs(model, q.t, q.s1, q.s2, q.j > 0, ode_solves);
  Complex value = integer_power(phi2, q.k);
  if (q.j > 0) value *= integer_power(phi1, q.j);
  return value;
}

ModelSpec hsc_model(double rho, double nu, double mu) {
  require_nonnegative(rho, "rho");
  require_nonnegative(nu, "nu");
  require_nonnegative(mu, "mu");
  ModelSpec model;
  model.name = "hsc";
  model.rates.type1 = {{{2, 0}, rho}, {{0, 1}, nu}, {kStay1, -(rho + nu)}};
  model.rates.type2 = {{{0, 0}, mu}, {kStay2, -mu}};
  model.rates.validate();
  // Progenitors only die: phi_{0,1} = 1 + (s2 - 1) e^{-mu t}.
  model.closed_form_phi2 = [mu](double t, Complex, Complex s2) {
    return 1.0 + (s2 - 1.0) * std::exp(-mu * t);
  };
  return model;
}

ModelSpec bds_model(double beta, double sigma, double delta) {
  require_nonnegative(beta, "beta");
  require_nonnegative(sigma, "sigma");
  require_nonnegative(delta, "delta");
  ModelSpec model;
  model.name = "bds";
  model.rates.type1 = {
      {{1, 1}, beta}, {{0, 1}, sigma}, {{0, 0}, delta}, {kStay1, -(beta + sigma + delta)}};
  model.rates.type2 = {{{0, 2}, beta}, {{0, 0}, delta}, {kStay2, -(beta + delta)}};
  model.rates.validate();
  // With w = phi_2 - 1 and z = 1/w the backward equation is linear,
  // z' = -beta - (beta - delta) z, so
  //   z(t) = z0 e^{(delta-beta) t} - beta t expm1((delta-beta) t) / ((delta-beta) t).
  // This is the usual closed form rearranged; it has no singularity at
  // beta == delta and no cancellation near it.
  model.closed_form_phi2 = [beta, delta](double t, Complex, Complex s2) -> Complex {
    const Complex w0 = s2 - 1.0;
    if (std::abs(w0) < 1e-14) return {1.0, 0.0};
    const double rate = delta - beta;
    const Complex z = (1.0 / w0) * std::exp(rate * t) - beta * t * relative_expm1(rate * t);
    return 1.0 + 1.0 / z;
  };
  return model;
}

}  // namespace csgf
