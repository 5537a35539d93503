#include "blowup/holonomy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr std::size_t kFitSamples = 20;

cplx power_k(cplx u, double k) {
  const double kr = std::round(k);
  if (std::abs(k - kr) < 1e-12 && kr >= 0.0) {
    cplx r = 1.0;
    for (int i = 0; i < static_cast<int>(kr); ++i) r *= u;
    return r;
  }
  return std::pow(u, k);
}

bool fiber_line_invariant(const PlanarField& F, cplx fiber_value) {
  const auto shifted = compose(F.f, BivariatePolynomial::x() + BivariatePolynomial::constant(fiber_value),
                               BivariatePolynomial::y());
  const double scale = std::max(1.0, F.f.max_abs_coefficient());
  for (const auto& t : shifted.terms())
    if (t.j == 0 && std::abs(t.c) > 1e-12 * scale) return false;
  return true;
}

std::vector<cplx> component(const Trajectory& tr, int idx) {
  std::vector<cplx> v;
  v.reserve(tr.samples.size());
  for (const auto& s : tr.samples) v.push_back(idx < 0 ? s.t : s.coords[static_cast<std::size_t>(idx)]);
  return v;
}

}  // namespace

HolonomyEstimate holonomy_multiplier(const ChartSystem& system, const EquilibriumRecord& eq_in, double base_radius,
                                     const std::vector<double>& fiber_radii, bool counterclockwise) {
  if (!(base_radius > 0.0)) throw ValidationError("InvalidArgument", "base_radius must be positive");
  if (fiber_radii.empty()) throw ValidationError("InvalidArgument", "at least one fiber radius is required");
  for (double r : fiber_radii)
    if (!(r > 0.0)) throw ValidationError("InvalidArgument", "fiber radii must be positive");
  const EquilibriumRecord eq = eq_in.classified ? eq_in : classify_spectrum(system, eq_in);
  const PlanarField& F = system.field(eq.chart);
  if (!fiber_line_invariant(F, eq.location[0]))
    throw NumericalError("NoInvariantFiber", "the fiber line through the equilibrium is not invariant");

  IntegrationConfig cfg;
  cfg.max_step = 0.01;
  const TimePath loop = TimePath::circle(eq.location[1], base_radius, 0.0, 1, counterclockwise);

  HolonomyEstimate est;
  est.fiber_radii = fiber_radii;
  for (double r : fiber_radii) {
    const auto leaf = continue_leaf(system, eq.chart, loop, eq.location[0] + r, 0, cfg);
    est.raw_ratios.push_back((leaf.fiber_end - eq.location[0]) / r);
  }

  // Richardson extrapolation in the fiber radius, radii halving from one to the next.
  std::vector<cplx> level = est.raw_ratios;
  int order = 0;
  while (level.size() > 1) {
    ++order;
    const double f = std::pow(2.0, order);
    std::vector<cplx> next;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) next.push_back((f * level[i + 1] - level[i]) / (f - 1.0));
    level = std::move(next);
  }
  est.multiplier = level.front();
  est.richardson_order = order;

  if (eq.domain != Domain::Degenerate) {
    const cplx lam = eq.eigenvalues[0] / eq.eigenvalues[1];
    const double sign = counterclockwise ? 1.0 : -1.0;
    est.predicted = std::exp(sign * 2.0 * std::numbers::pi * cplx{0.0, 1.0} * lam);
    est.deviation = std::abs(est.multiplier - *est.predicted);
  }
  return est;
}

Trajectory approach_blowup(const ChartSystem& system, const EquilibriumRecord& eq, const Point& start, cplx t0,
                           double tau_max, const IntegrationConfig& cfg_in) {
  IntegrationConfig cfg = cfg_in;
  cfg.clock = TimeMode::Chart;
  cfg.allow_chart_switch = false;
  cfg.max_step = std::min(cfg.max_step, 0.05 / tau_max);
  // Follow the stable direction: real chart time runs forward for a sink, backward for a source.
  const EquilibriumRecord c = eq.classified ? eq : classify_spectrum(system, eq);
  const double dir = c.eigenvalues[0].real() > 0.0 ? -1.0 : 1.0;
  const TimePath path = TimePath::line(0.0, dir * tau_max);
  Trajectory tr = integrate_path(system, eq.chart, start, path, cfg, DesignatedEquilibrium{eq.chart, eq.location}, t0);
  if (tr.terminated_reason != Termination::EnteredSingularityBall)
    throw NumericalError("NoBlowUp", "approach ended with " + to_string(tr.terminated_reason) +
                                         " before reaching the singularity ball");
  return tr;
}

DetourReport masuda_detour(const ChartSystem& system, const EquilibriumRecord& eq_in, const Trajectory& approach,
                           double loop_radius, int cycles, double closure_threshold, double max_step) {
  if (!(loop_radius > 0.0)) throw ValidationError("InvalidArgument", "loop_radius must be positive");
  if (cycles < 1) throw ValidationError("InvalidArgument", "cycles must be positive");
  if (!(closure_threshold > 0.0)) throw ValidationError("InvalidArgument", "closure_threshold must be positive");
  if (approach.terminated_reason != Termination::EnteredSingularityBall || approach.samples.size() < 5)
    throw ValidationError("NoApproach", "approach must end in the singularity ball of the blow-up equilibrium");
  const EquilibriumRecord eq = eq_in.classified ? eq_in : classify_spectrum(system, eq_in);
  if (eq.chart == Chart::XY) throw ValidationError("InvalidArgument", "blow-up equilibria live in UZ or VW");
  for (const auto& s : approach.samples)
    if (s.chart != eq.chart) throw ValidationError("NoApproach", "approach must stay in the equilibrium's chart");

  DetourReport rep;
  rep.cycles = cycles;
  rep.chart = eq.chart;
  rep.closure_threshold = closure_threshold;
  const cplx u_eq = eq.location[0];
  const ChartClock& clock = system.clock(eq.chart);

  // Fit t = T + C u^k on the tail of the approach, with k from the clock's growth.
  const std::size_t n = std::min(kFitSamples, approach.samples.size());
  const auto first = approach.samples.end() - static_cast<std::ptrdiff_t>(n);
  {
    double mx = 0, my = 0, sxx = 0, sxy = 0;
    std::vector<double> lx, ly;
    for (auto it = first; it != approach.samples.end(); ++it) {
      lx.push_back(std::log(std::abs(it->coords[0] - u_eq)));
      ly.push_back(std::log(std::abs(clock(it->coords))));
    }
    for (std::size_t i = 0; i < n; ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    double k = sxx > 0 ? sxy / sxx : static_cast<double>(clock.exponent);
    if (std::abs(k - std::round(k)) < 0.05) k = std::round(k);
    // rho ~ u^k and u ~ exp(lambda_1 tau) integrate to t - T ~ u^k / (lambda_1 k).
    rep.fit_exponent = k;
  }
  const double k = rep.fit_exponent;
  if (!(k > 0.0)) throw NumericalError("NoBlowUp", "original time does not converge along the approach");
  {
    cplx s1 = 0, sphi = 0, st = 0, sphit = 0;
    double sphi2 = 0;
    for (auto it = first; it != approach.samples.end(); ++it) {
      const cplx phi = power_k(it->coords[0] - u_eq, k);
      s1 += 1.0;
      sphi += phi;
      sphi2 += std::norm(phi);
      st += it->t;
      sphit += std::conj(phi) * it->t;
    }
    // Normal equations [[n, sum phi], [sum conj(phi), sum |phi|^2]] (T, C) = (sum t, sum conj(phi) t).
    const cplx a = s1, b = sphi, c = std::conj(sphi), d = sphi2;
    const cplx det = a * d - b * c;
    rep.t_estimate = (d * st - b * sphit) / det;
    rep.fit_coefficient = (-c * st + a * sphit) / det;
  }
  rep.a_u = std::pow(rep.fit_coefficient, -1.0 / k);
  rep.t_enter = approach.back().t;

  const cplx T = rep.t_estimate;
  const cplx offset = rep.t_enter - T;
  const cplx dir = std::abs(offset) > 0 ? offset / std::abs(offset) : cplx{1.0};
  const DesignatedEquilibrium ball{eq.chart, eq.location};

  IntegrationConfig cfg;
  cfg.clock = TimeMode::Original;
  cfg.allow_chart_switch = false;
  cfg.max_step = 0.01;
  auto check = [&](const Trajectory& tr, const char* what) {
    if (tr.terminated_reason == Termination::EnteredSingularityBall)
      throw NumericalError("LoopHitsSingularity", std::string(what) + " entered the singularity ball");
    if (tr.terminated_reason != Termination::Completed)
      throw NumericalError("IntegrationFailed", std::string(what) + " ended with " + to_string(tr.terminated_reason));
  };

  const TimePath radial = TimePath::line(rep.t_enter, T + loop_radius * dir);
  // The leg starts inside the ball and leads out of it, so no ball check here.
  const Trajectory leg = integrate_path(system, eq.chart, approach.back().coords, radial, cfg, std::nullopt, rep.t_enter);
  check(leg, "radial leg");

  rep.t_loop = TimePath::circle(T, loop_radius, std::arg(dir), cycles, true);
  cfg.max_step = max_step;
  rep.loop_trajectory = integrate_path(system, eq.chart, leg.back().coords, rep.t_loop, cfg, ball, rep.t_loop.start());
  check(rep.loop_trajectory, "detour loop");

  const auto& samples = rep.loop_trajectory.samples;
  rep.start_state = samples.front().coords;
  rep.end_state = samples.back().coords;
  const double scale = std::abs(rep.start_state[0] - u_eq);
  auto gap = [&](const Point& p) {
    return norm2({p[0] - rep.start_state[0], p[1] - rep.start_state[1]});
  };
  rep.discrepancy = gap(rep.end_state);
  rep.relative_discrepancy = rep.discrepancy / scale;
  for (const auto& s : samples) {
    const double c = std::round(s.s);
    if (c >= 1.0 && std::abs(s.s - c) < 1e-9 && rep.cycle_discrepancy.size() < static_cast<std::size_t>(c))
      rep.cycle_discrepancy.push_back(gap(s.coords) / scale);
  }
  rep.closed = rep.relative_discrepancy < closure_threshold;

  if (rep.closed) {
    const double tol = std::max(1e-9, closure_threshold * scale);
    rep.windings.w_t = winding_number(component(rep.loop_trajectory, -1), T, 1e-9 * std::max(1.0, std::abs(T)));
    rep.windings.w_1 = winding_number(component(rep.loop_trajectory, 0), u_eq, tol);
    const auto second = component(rep.loop_trajectory, 1);
    double spread = 0.0;
    for (const auto& v : second) spread = std::max(spread, std::abs(v - eq.location[1]));
    if (spread > 1e-12) {
      try {
        rep.windings.w_2 = winding_number(second, eq.location[1], tol);
      } catch (const NumericalError&) {
        // The second trace may hug the equilibrium too closely to resolve; leave it unset.
      }
    }
    if (eq.semisimple && eq.domain != Domain::Degenerate && std::abs(k - std::round(k)) == 0.0 &&
        *rep.windings.w_t != static_cast<int>(k) * *rep.windings.w_1)
      throw NumericalError("WindingLawViolated", "closed loop with w_t = " + std::to_string(*rep.windings.w_t) +
                                                     " but w_1 = " + std::to_string(*rep.windings.w_1));
  }
  return rep;
}

std::vector<Branch> blowup_star(const ChartSystem& system, const EquilibriumRecord& blowup_eq,
                                const DetourReport& report) {
  (void)system;
  (void)blowup_eq;
  if (!report.closed || !report.windings.w_t || !report.windings.w_1)
    throw NumericalError("NotClosed", "a blow-up star needs a closed detour");
  const int wt = *report.windings.w_t;
  const int w1 = *report.windings.w_1;
  if (wt == 0) return {};
  // t - T = theta^wt and u - u_eq ~ a_u theta^w1: real t - T > 0 (blow-down) at
  // arg theta = 2 pi j / wt, t - T < 0 (blow-up) halfway between.
  std::vector<Branch> out;
  const int count = 2 * std::abs(wt);
  for (int j = 0; j < count; ++j) {
    const double phi = std::numbers::pi * j / std::abs(wt);
    const double arg_u = std::arg(report.a_u) + w1 * phi;
    out.push_back({std::polar(1.0, arg_u), j % 2 == 0 ? BranchKind::BlowDown : BranchKind::BlowUp});
  }
  return out;
}

}  // namespace blowup
