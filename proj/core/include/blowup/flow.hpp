#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blowup/charts.hpp"
#include "blowup/path.hpp"

namespace blowup {

// Which time the path is drawn in.
//  Original: the path is in the original time t; chart fields are divided by their clock.
//  Chart:    the path is in the starting chart's own time; t is accumulated by dt = rho dtau.
enum class TimeMode { Original, Chart };

struct IntegrationConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.01;  // in path-parameter units; one segment spans 1
  double singularity_radius = 1e-4;
  double chart_switch_threshold = 2.0;
  double divergence_bound = 1e12;
  TimeMode clock = TimeMode::Original;
  // Ignored in Chart mode, where the clock would change under a switch.
  bool allow_chart_switch = true;

  void validate() const;
};

enum class Termination { Completed, EnteredSingularityBall, StepUnderflow, Diverged };

std::string to_string(Termination t);

struct Sample {
  double s = 0.0;
  cplx t;
  Chart chart = Chart::XY;
  Point coords{};
};

struct Trajectory {
  std::vector<Sample> samples;
  Termination terminated_reason = Termination::Completed;
  long rejected_steps = 0;

  const Sample& back() const { return samples.back(); }
};

struct DesignatedEquilibrium {
  Chart chart = Chart::UZ;
  Point location{};
};

// Solves the chart ODE along the path. Samples are recorded at every accepted step.
// t0 is the original time at the start; it defaults to path.start() in Original mode
// and to 0 in Chart mode.
Trajectory integrate_path(const ChartSystem& system, Chart start_chart, const Point& start,
                          const TimePath& path, const IntegrationConfig& cfg = {},
                          const std::optional<DesignatedEquilibrium>& designated = std::nullopt,
                          std::optional<cplx> t0 = std::nullopt);

// Signed number of turns of a closed sampled curve around center.
// Throws NumericalError "NotClosed" when the endpoints differ by more than closure_tol,
// and "TooCoarse" when sampling cannot resolve the argument.
int winding_number(const std::vector<cplx>& curve, cplx center, double closure_tol = 1e-9);

struct LeafContinuation {
  cplx fiber_end;
  std::vector<cplx> base_trace;
  std::vector<cplx> fiber_trace;
};

// Follows the leaf over base_loop, drawn in the base coordinate, by integrating
// d fiber / d base = F_fiber / F_base. fiber_index selects which chart coordinate is
// the fiber (0: first, 1: second). Throws NumericalError "SectionTangency" when the leaf
// becomes tangent to the fiber.
LeafContinuation continue_leaf(const ChartSystem& system, Chart chart, const TimePath& base_loop,
                               cplx fiber_start, int fiber_index = 0, const IntegrationConfig& cfg = {});

// Columns s, re_t, im_t, chart, re_c1, im_c1, re_c2, im_c2 with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace blowup
