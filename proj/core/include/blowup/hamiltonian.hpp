#pragma once

#include <vector>

#include "blowup/flow.hpp"

namespace blowup {

struct PolynomialHamiltonian {
  BivariatePolynomial H;
  cplx level_c;
};

// (H_y, -H_x), of degree deg H - 1.
PlanarField hamiltonian_field(const PolynomialHamiltonian& ham);

// Energies with the level subtracted, so each vanishes on the leaf:
//   H_xy = H - c,  H_uz = u^n (H(1/u, z/u) - c),  H_vw = v^n (H(w/v, 1/v) - c),  n = deg H.
struct ChartEnergies {
  BivariatePolynomial H_xy, H_uz, H_vw;
  int n = 0;

  const BivariatePolynomial& in(Chart c) const;
};

ChartEnergies compactify_energy(const PolynomialHamiltonian& ham);

// max over samples of |H_chart(state) - level_chart|.
double energy_drift(const PolynomialHamiltonian& ham, const Trajectory& trajectory);

// Pendulum H = y^2 / 2 - G(x) with G given by ascending coefficients.
PolynomialHamiltonian pendulum_hamiltonian(const std::vector<cplx>& G_coeffs, cplx level = 0.0);

struct PendulumWindings {
  int m = 0;
  int w_t = 0;
  int w_v = 0;
  int w_w = 0;
  int leaves = 1;
  double theta_radius = 0.0;      // final regularizing radius used
  double exponent_ratio = 0.0;    // fitted d log|v| / d log|w|, expected (m+1)/(m-1)
  double fit_residual = 0.0;      // max deviation of the log-log fit
  double closure_discrepancy = 0.0;  // relative, at the closing cycle
};

// Traces the zero-energy leaf through v = w = 0 in original time around its blow-up time,
// starting from the regularized point w = theta^(m-1), v ~ a theta^(m+1).
// Throws NumericalError "DegenerateLeadingTerm" when G_0 ~ 0 and "NotClosed" when no
// cycle count up to 2m closes.
PendulumWindings pendulum_loop_windings(const std::vector<cplx>& G_coeffs, double loop_radius = 0.3);

}  // namespace blowup
