#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "csgf/ode.hpp"

namespace csgf {

using Complex = std::complex<double>;

// Offspring pair (type-1 count, type-2 count) produced when a particle's
// lifetime ends.
using Offspring = std::pair<unsigned, unsigned>;
using RateTable = std::map<Offspring, double>;

// Instantaneous rates a_i(k, l) of a time-homogeneous two-type branching
// process. The "no event" diagonals a_1(1,0) and a_2(0,1) are stored
// explicitly, so each table sums to zero.
struct TwoTypeRates {
  RateTable type1;
  RateTable type2;

  // Builds rates from the off-diagonal events only; the diagonals are set
  // to minus the row sums.
  static TwoTypeRates from_events(RateTable type1_events, RateTable type2_events);

  double alpha1() const;
  double alpha2() const;

  // Throws InvalidArgument unless the tables sum to zero and every
  // off-diagonal rate is non-negative.
  void validate() const;

  const RateTable& table(int type_index) const;
};

using ClosedFormPhi = std::function<Complex(double t, Complex s1, Complex s2)>;

struct ModelSpec {
  std::string name;
  TwoTypeRates rates;
  // phi_{0,1}(t, s1, s2) when available in closed form.
  ClosedFormPhi closed_form_phi2;
  ode::Tolerances tolerances;
};

struct PgfQuery {
  double t = 0.0;
  unsigned j = 0;
  unsigned k = 0;
  Complex s1{1.0, 0.0};
  Complex s2{1.0, 0.0};
};

// u_i(s1, s2) = sum_{k,l} a_i(k, l) s1^k s2^l, i in {1, 2}.
Complex pseudo_gf(const TwoTypeRates& rates, int type_index, Complex s1, Complex s2);

using BackwardRhs = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

// Backward equations over (phi_1, phi_2): d phi_i / dt = u_i(phi_1, phi_2).
BackwardRhs backward_rhs(const TwoTypeRates& rates);

// Backward equation for phi_1 alone with phi_2 substituted from its closed
// form at the given (s1, s2).
BackwardRhs reduced_backward_rhs(const ModelSpec& model, Complex s1, Complex s2);

// Single-particle generating functions (phi_{1,0}, phi_{0,1}) at (t, s1, s2).
// phi_{1,0} is only integrated when need_phi1 is set (otherwise returned
// as 0); `ode_solves` is incremented once per integration performed.
std::pair<Complex, Complex> single_particle_pgfs(const ModelSpec& model, double t, Complex s1,
                                                 Complex s2, bool need_phi1,
                                                 std::size_t* ode_solves = nullptr);

// phi_{jk}(t, s1, s2) = phi_{1,0}^j phi_{0,1}^k.
Complex pgf_eval(const ModelSpec& model, const PgfQuery& q, std::size_t* ode_solves = nullptr);

// z^p by repeated squaring.
Complex integer_power(Complex z, unsigned p);

// Hematopoiesis: HSC self-renewal rho, differentiation nu, progenitor exit mu.
ModelSpec hsc_model(double rho, double nu, double mu);

// Birth-death-shift transposon model with per-element rates beta, sigma, delta.
ModelSpec bds_model(double beta, double sigma, double delta);

}  // namespace csgf
