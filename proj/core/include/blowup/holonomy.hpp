#pragma once

#include <optional>
#include <vector>

#include "blowup/equilibria.hpp"
#include "blowup/flow.hpp"

namespace blowup {

struct HolonomyEstimate {
  cplx multiplier;
  std::vector<double> fiber_radii;
  std::vector<cplx> raw_ratios;  // h(r) / r per fiber radius
  int richardson_order = 0;
  std::optional<cplx> predicted;  // exp(2 pi i lambda_1 / lambda_2)
  double deviation = 0.0;
};

// Holonomy of the fiber (first chart coordinate) over a circle of base_radius around
// the equilibrium in the second coordinate. Throws NumericalError "NoInvariantFiber"
// unless the first field component vanishes on the fiber line through the equilibrium.
HolonomyEstimate holonomy_multiplier(const ChartSystem& system, const EquilibriumRecord& eq, double base_radius,
                                     const std::vector<double>& fiber_radii = {1e-2, 5e-3, 2.5e-3},
                                     bool counterclockwise = true);

struct Windings {
  std::optional<int> w_t;
  std::optional<int> w_1;  // u or v
  std::optional<int> w_2;  // z or w; empty when the trace sits on the invariant line
};

struct DetourReport {
  int cycles = 0;
  Chart chart = Chart::UZ;
  TimePath t_loop;
  cplx t_enter;
  cplx t_estimate;        // fitted blow-up time T
  cplx fit_coefficient;   // C in t - T = C u^k
  double fit_exponent = 0.0;  // k
  cplx a_u;               // leading coefficient of u in the covering variable
  Point start_state{};
  Point end_state{};
  double discrepancy = 0.0;           // |end - start|
  double relative_discrepancy = 0.0;  // discrepancy / |u_start - u_eq|
  double closure_threshold = 1e-6;    // relative
  bool closed = false;
  Windings windings;
  std::vector<double> cycle_discrepancy;  // relative, after each cycle
  Trajectory loop_trajectory;
};

// Real-time approach to a blow-up equilibrium in the chart clock, stopping in the
// singularity ball. start is in eq.chart; t0 is the original time at the start.
Trajectory approach_blowup(const ChartSystem& system, const EquilibriumRecord& eq, const Point& start,
                           cplx t0 = 0.0, double tau_max = 200.0, const IntegrationConfig& cfg = {});

// Circumvents the blow-up time by `cycles` circles of loop_radius in original time.
// Throws NumericalError "LoopHitsSingularity" when the lifted loop enters the ball and
// "WindingLawViolated" if a closed loop breaks w_t = k w_1 at a nondegenerate
// semisimple equilibrium.
DetourReport masuda_detour(const ChartSystem& system, const EquilibriumRecord& blowup_eq,
                           const Trajectory& approach, double loop_radius, int cycles,
                           double closure_threshold = 1e-6, double max_step = 1e-3);

enum class BranchKind { BlowUp, BlowDown };

struct Branch {
  cplx direction;  // unit complex, in the fiber coordinate
  BranchKind kind = BranchKind::BlowUp;
};

// Alternating real-time blow-up / blow-down directions, w_t of each.
// Throws NumericalError "NotClosed" unless report.closed.
std::vector<Branch> blowup_star(const ChartSystem& system, const EquilibriumRecord& blowup_eq,
                                const DetourReport& report);

}  // namespace blowup
