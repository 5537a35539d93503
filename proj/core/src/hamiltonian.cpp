#include "blowup/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

BivariatePolynomial lift(const BivariatePolynomial& p, int n, bool uz) {
  BivariatePolynomial::TermMap t;
  for (const auto& term : p.terms()) t[{n - term.j - term.k, uz ? term.k : term.j}] += term.c;
  return BivariatePolynomial(t);
}

struct LoopResult {
  int w_t = 0, w_v = 0, w_w = 0;
  double discrepancy = 0.0;
};

}  // namespace

PlanarField hamiltonian_field(const PolynomialHamiltonian& ham) {
  PlanarField F = make_field(ham.H.dy(), -ham.H.dx());
  F.degree_m = std::max(1, ham.H.degree() - 1);
  return F;
}

const BivariatePolynomial& ChartEnergies::in(Chart c) const {
  switch (c) {
    case Chart::XY: return H_xy;
    case Chart::UZ: return H_uz;
    case Chart::VW: return H_vw;
  }
  return H_xy;
}

ChartEnergies compactify_energy(const PolynomialHamiltonian& ham) {
  ChartEnergies e;
  e.n = ham.H.degree();
  e.H_xy = ham.H - BivariatePolynomial::constant(ham.level_c);
  e.H_uz = lift(e.H_xy, e.n, true);
  e.H_vw = lift(e.H_xy, e.n, false);
  return e;
}

double energy_drift(const PolynomialHamiltonian& ham, const Trajectory& trajectory) {
  const ChartEnergies e = compactify_energy(ham);
  double worst = 0.0;
  for (const auto& s : trajectory.samples)
    worst = std::max(worst, std::abs(e.in(s.chart)(s.coords[0], s.coords[1])));
  return worst;
}

PolynomialHamiltonian pendulum_hamiltonian(const std::vector<cplx>& G_coeffs, cplx level) {
  PolynomialHamiltonian ham;
  ham.H = BivariatePolynomial::monomial(0, 2, 0.5) - BivariatePolynomial::univariate(G_coeffs);
  ham.level_c = level;
  return ham;
}

PendulumWindings pendulum_loop_windings(const std::vector<cplx>& G_coeffs_in, double loop_radius) {
  std::vector<cplx> G = G_coeffs_in;
  while (!G.empty() && G.back() == 0.0) G.pop_back();
  if (G.size() < 4) throw ValidationError("InvalidArgument", "the pendulum theorem needs deg G = m + 1 >= 3");
  if (!(loop_radius > 0.0)) throw ValidationError("InvalidArgument", "loop_radius must be positive");
  double gscale = 0.0;
  for (const auto& c : G) gscale = std::max(gscale, std::abs(c));
  const cplx G0 = G.back();
  if (std::abs(G0) < 1e-12 * gscale) throw NumericalError("DegenerateLeadingTerm", "leading coefficient G_0 vanishes");

  const int m = static_cast<int>(G.size()) - 2;
  const auto ham = pendulum_hamiltonian(G, 0.0);
  const ChartSystem sys = to_charts(hamiltonian_field(ham));
  const auto energy = compactify_energy(ham).H_vw;
  const auto energy_v = energy.dx();
  const cplx a = std::pow(2.0 * G0, 1.0 / (m - 1));

  // Point of the zero-energy leaf at w = theta^(m-1), polished from v ~ a theta^(m+1).
  auto leaf_point = [&](double theta) {
    const cplx w = std::pow(theta, m - 1);
    cplx v = a * std::pow(theta, m + 1);
    for (int it = 0; it < 50; ++it) {
      const cplx d = energy_v(v, w);
      if (std::abs(d) == 0.0) break;
      const cplx step = energy(v, w) / d;
      v -= step;
      if (std::abs(step) < 1e-16 * std::abs(v)) break;
    }
    return Point{v, w};
  };

  auto run = [&](double theta) {
    const Point p0 = leaf_point(theta);
    // dt = -2/(m-1) (1 + ...) dw puts the blow-up time at t0 + 2 w0 / (m-1).
    const cplx t0 = 0.0;
    const cplx T = t0 + 2.0 * p0[1] / static_cast<double>(m - 1);
    const int max_cycles = 2 * m;
    const TimePath loop = TimePath::circle(T, std::abs(t0 - T), std::arg(t0 - T), max_cycles, true);
    IntegrationConfig cfg;
    cfg.allow_chart_switch = false;
    cfg.max_step = 1e-3;
    const Trajectory tr = integrate_path(sys, Chart::VW, p0, loop, cfg, std::nullopt, t0);
    if (tr.terminated_reason != Termination::Completed)
      throw NumericalError("IntegrationFailed", "pendulum loop ended with " + to_string(tr.terminated_reason));

    const double scale = norm2(p0);
    LoopResult res;
    int closing = 0;
    for (const auto& s : tr.samples) {
      const double c = std::round(s.s);
      if (c < 1.0 || std::abs(s.s - c) > 1e-9) continue;
      const double d = norm2({s.coords[0] - p0[0], s.coords[1] - p0[1]}) / scale;
      if (d < 1e-6) {
        closing = static_cast<int>(c);
        res.discrepancy = d;
        break;
      }
    }
    if (closing == 0) throw NumericalError("NotClosed", "no cycle count up to 2m closes the pendulum loop");
    std::vector<cplx> ts, vs, ws;
    for (const auto& s : tr.samples) {
      if (s.s > closing + 1e-9) break;
      ts.push_back(s.t);
      vs.push_back(s.coords[0]);
      ws.push_back(s.coords[1]);
    }
    const double tol = 1e-6 * scale;
    res.w_t = winding_number(ts, T, 1e-9 * std::max(1.0, std::abs(T)));
    res.w_v = winding_number(vs, 0.0, tol);
    res.w_w = winding_number(ws, 0.0, tol);
    return res;
  };

  PendulumWindings out;
  out.m = m;
  out.leaves = m % 2 == 0 ? 1 : 2;

  double theta = loop_radius;
  LoopResult prev = run(theta);
  for (int halving = 0; halving < 6; ++halving) {
    const LoopResult next = run(theta / 2);
    theta /= 2;
    const bool same = next.w_t == prev.w_t && next.w_v == prev.w_v && next.w_w == prev.w_w;
    prev = next;
    if (same) break;
  }
  out.theta_radius = theta;
  out.w_t = prev.w_t;
  out.w_v = prev.w_v;
  out.w_w = prev.w_w;
  out.closure_discrepancy = prev.discrepancy;

  // Puiseux exponent ratio from the regularized leaf points.
  std::vector<double> lx, ly;
  for (double r : {theta, theta / 2, theta / 4}) {
    const Point p = leaf_point(r);
    lx.push_back(std::log(std::abs(p[1])));
    ly.push_back(std::log(std::abs(p[0])));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < 3; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  out.exponent_ratio = sxy / sxx;
  for (int i = 0; i < 3; ++i)
    out.fit_residual = std::max(out.fit_residual, std::abs(ly[i] - (my + out.exponent_ratio * (lx[i] - mx))));
  return out;
}

}  // namespace blowup
