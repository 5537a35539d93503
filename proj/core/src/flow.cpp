#include "blowup/flow.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "blowup/errors.hpp"
#include "rk.hpp"

namespace blowup {

namespace {

using detail::RkStatus;
using detail::StepAction;
using State3 = detail::State<3>;
using State1 = detail::State<1>;

constexpr Chart kCharts[] = {Chart::XY, Chart::UZ, Chart::VW};

bool finite_point(const Point& p) {
  for (const auto& c : p)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// Chart with the smallest coordinates among those containing p.
std::pair<Chart, Point> best_chart(Chart current, const Point& p) {
  Chart best = current;
  Point best_p = p;
  double best_size = max_abs(p);
  for (Chart c : kCharts) {
    if (c == current) continue;
    auto q = convert(current, c, p);
    if (!q || !finite_point(*q)) continue;
    const double sz = max_abs(*q);
    if (sz < best_size) {
      best = c;
      best_p = *q;
      best_size = sz;
    }
  }
  return {best, best_p};
}

}  // namespace

void IntegrationConfig::validate() const {
  auto in_range = [](double v) { return v > 0.0 && v <= 1e-2; };
  if (!in_range(rel_tol)) throw ValidationError("InvalidConfig", "rel_tol must lie in (0, 1e-2]");
  if (!in_range(abs_tol)) throw ValidationError("InvalidConfig", "abs_tol must lie in (0, 1e-2]");
  if (!(max_step > 0.0)) throw ValidationError("InvalidConfig", "max_step must be positive");
  if (!(singularity_radius > 0.0)) throw ValidationError("InvalidConfig", "singularity_radius must be positive");
  if (!(chart_switch_threshold > 0.0))
    throw ValidationError("InvalidConfig", "chart_switch_threshold must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::EnteredSingularityBall: return "EnteredSingularityBall";
    case Termination::StepUnderflow: return "StepUnderflow";
    case Termination::Diverged: return "Diverged";
  }
  return "?";
}

Trajectory integrate_path(const ChartSystem& system, Chart start_chart, const Point& start,
                          const TimePath& path, const IntegrationConfig& cfg,
                          const std::optional<DesignatedEquilibrium>& designated, std::optional<cplx> t0) {
  cfg.validate();
  path.validate();
  if (!finite_point(start)) throw ValidationError("InvalidStart", "start coordinates must be finite");

  const bool original = cfg.clock == TimeMode::Original;
  const bool switching = original && cfg.allow_chart_switch;
  Chart chart = start_chart;

  Trajectory traj;
  State3 y{start[0], start[1], t0.value_or(original ? path.start() : cplx{0.0})};
  traj.samples.push_back({0.0, y[2], chart, start});

  auto rhs = [&](double s, const State3& st, long piece) -> State3 {
    const Point p{st[0], st[1]};
    const Point F = evaluate(system.field(chart), p);
    const cplx rho = system.clock(chart)(p);
    const cplx dt = path.derivative(s, piece);
    if (original) return {F[0] / rho * dt, F[1] / rho * dt, dt};
    return {F[0] * dt, F[1] * dt, rho * dt};
  };

  Termination reason = Termination::Completed;
  auto observer = [&](double s, State3& st) -> StepAction {
    Point p{st[0], st[1]};
    StepAction action = StepAction::Continue;
    if (!finite_point(p)) {
      reason = Termination::Diverged;
      return StepAction::Stop;
    }
    if (switching && max_abs(p) > cfg.chart_switch_threshold) {
      auto [c, q] = best_chart(chart, p);
      if (c != chart) {
        chart = c;
        p = q;
        st[0] = q[0];
        st[1] = q[1];
        action = StepAction::Restart;
      }
    }
    traj.samples.push_back({s, st[2], chart, p});
    if (max_abs(p) > cfg.divergence_bound) {
      // Switching already moved us to the smallest chart when it is allowed.
      reason = Termination::Diverged;
      return StepAction::Stop;
    }
    if (designated) {
      if (auto q = convert(chart, designated->chart, p)) {
        const Point d{(*q)[0] - designated->location[0], (*q)[1] - designated->location[1]};
        if (norm2(d) < cfg.singularity_radius) {
          reason = Termination::EnteredSingularityBall;
          return StepAction::Stop;
        }
      }
    }
    return action;
  };

  detail::RkControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_step = cfg.max_step;
  ctl.min_step = 1e-14 * path.s_end();
  ctl.initial_step = std::min(1e-3, cfg.max_step);
  detail::RkStats stats;
  const RkStatus status = detail::dopri5<3>(rhs, y, 0.0, path.s_end(), ctl, observer, &stats);
  traj.rejected_steps = stats.rejected;
  switch (status) {
    case RkStatus::Completed: traj.terminated_reason = Termination::Completed; break;
    case RkStatus::Stopped: traj.terminated_reason = reason; break;
    case RkStatus::StepUnderflow: traj.terminated_reason = Termination::StepUnderflow; break;
    case RkStatus::NonFinite: traj.terminated_reason = Termination::Diverged; break;
  }
  return traj;
}

int winding_number(const std::vector<cplx>& curve, cplx center, double closure_tol) {
  if (curve.size() < 3) throw NumericalError("TooCoarse", "a closed curve needs at least three samples");
  const double gap = std::abs(curve.back() - curve.front());
  if (gap > closure_tol)
    throw NumericalError("NotClosed", "curve endpoints differ by " + std::to_string(gap));

  double min_dist = std::numeric_limits<double>::infinity();
  double max_spacing = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    min_dist = std::min(min_dist, std::abs(curve[i] - center));
    if (i == 0) continue;
    max_spacing = std::max(max_spacing, std::abs(curve[i] - curve[i - 1]));
    total += std::arg((curve[i] - center) / (curve[i - 1] - center));
  }
  if (!(min_dist > 10.0 * max_spacing))
    throw NumericalError("TooCoarse", "samples pass within 10 sample spacings of the center");
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.05)
    throw NumericalError("TooCoarse", "accumulated argument is not close to a whole number of turns");
  return static_cast<int>(rounded);
}

LeafContinuation continue_leaf(const ChartSystem& system, Chart chart, const TimePath& base_loop,
                               cplx fiber_start, int fiber_index, const IntegrationConfig& cfg) {
  cfg.validate();
  base_loop.validate();
  if (fiber_index != 0 && fiber_index != 1)
    throw ValidationError("InvalidArgument", "fiber_index must be 0 or 1");
  const int base_index = 1 - fiber_index;
  const PlanarField& field = system.field(chart);

  auto point = [&](cplx base, cplx fiber) {
    Point p;
    p[static_cast<std::size_t>(fiber_index)] = fiber;
    p[static_cast<std::size_t>(base_index)] = base;
    return p;
  };

  LeafContinuation out;
  out.base_trace.push_back(base_loop.start());
  out.fiber_trace.push_back(fiber_start);

  auto rhs = [&](double s, const State1& st, long piece) -> State1 {
    const Point F = evaluate(field, point(base_loop.at(s, piece), st[0]));
    return {F[static_cast<std::size_t>(fiber_index)] / F[static_cast<std::size_t>(base_index)] *
            base_loop.derivative(s, piece)};
  };
  auto observer = [&](double s, State1& st) -> StepAction {
    const cplx b = base_loop.at(s);
    const Point F = evaluate(field, point(b, st[0]));
    if (std::abs(F[static_cast<std::size_t>(base_index)]) < 1e-10 * std::abs(F[static_cast<std::size_t>(fiber_index)]))
      throw NumericalError("SectionTangency", "leaf is tangent to the fiber at s = " + std::to_string(s));
    out.base_trace.push_back(b);
    out.fiber_trace.push_back(st[0]);
    return StepAction::Continue;
  };

  detail::RkControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_step = cfg.max_step;
  ctl.min_step = 1e-14 * base_loop.s_end();
  ctl.initial_step = std::min(1e-3, cfg.max_step);
  State1 y{fiber_start};
  const RkStatus status = detail::dopri5<1>(rhs, y, 0.0, base_loop.s_end(), ctl, observer);
  if (status != RkStatus::Completed)
    throw NumericalError("SectionTangency", "leaf continuation broke down before closing the base loop");
  out.fiber_end = y[0];
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "s,re_t,im_t,chart,re_c1,im_c1,re_c2,im_c2\n";
  for (const auto& smp : traj.samples) {
    out << smp.s << ',' << smp.t.real() << ',' << smp.t.imag() << ',' << to_string(smp.chart) << ','
        << smp.coords[0].real() << ',' << smp.coords[0].imag() << ',' << smp.coords[1].real() << ','
        << smp.coords[1].imag() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace blowup
