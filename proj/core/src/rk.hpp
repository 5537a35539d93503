#pragma once

// Dormand-Prince 5(4) with PI step-size control on a real parameter s and a
// complex state. Internal to the core library.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace blowup::detail {

using cplx = std::complex<double>;

template <int N>
using State = std::array<cplx, N>;

struct RkControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;
  double min_step = 1e-14;  // absolute, in s units
  double initial_step = 1e-3;
};

enum class RkStatus { Completed, Stopped, StepUnderflow, NonFinite };

// What the observer asks for after an accepted step.
enum class StepAction { Continue, Stop, Restart };

struct RkStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

template <int N>
inline bool finite(const State<N>& y) {
  for (const auto& c : y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// rhs(s, y, piece) -> State<N>, where piece = floor(s) of the step being taken so that
// the right-hand side at a piece end still uses that piece's path derivative.
// observer(s, y) may modify y and returns a StepAction.
// The step never crosses an integer value of s.
template <int N, class Rhs, class Observer>
RkStatus dopri5(Rhs&& rhs, State<N>& y, double s0, double s1, const RkControl& ctl,
                Observer&& observer, RkStats* stats = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  RkStats local;
  RkStats& st = stats ? *stats : local;

  double s = s0;
  double h = std::min({ctl.initial_step, ctl.max_step, s1 - s0});
  double err_prev = 1e-4;
  bool rejected_last = false;

  auto piece_of = [](double x) { return static_cast<long>(std::floor(x + 1e-12)); };
  long piece = piece_of(s);
  State<N> k1 = rhs(s, y, piece), k2, k3, k4, k5, k6, k7, tmp, ynew;
  ++st.evaluations;
  if (!finite<N>(k1)) return RkStatus::NonFinite;

  while (s < s1) {
    const double next_break = std::min(s1, std::floor(s + 1e-12) + 1.0);
    double hstep = std::min(h, next_break - s);
    bool last_in_piece = false;
    if (hstep >= next_break - s) {
      hstep = next_break - s;
      last_in_piece = true;
    }
    if (h < ctl.min_step) return RkStatus::StepUnderflow;

    auto stage = [&](State<N>& out, double c, auto&&... pairs) {
      tmp = y;
      auto add = [&](double a, const State<N>& k) {
        for (int i = 0; i < N; ++i) tmp[i] += hstep * a * k[i];
      };
      (add(pairs.first, *pairs.second), ...);
      out = rhs(s + c * hstep, tmp, piece);
      ++st.evaluations;
    };
    using P = std::pair<double, const State<N>*>;
    stage(k2, c2, P{a21, &k1});
    stage(k3, c3, P{a31, &k1}, P{a32, &k2});
    stage(k4, c4, P{a41, &k1}, P{a42, &k2}, P{a43, &k3});
    stage(k5, c5, P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4});
    stage(k6, 1.0, P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5});
    for (int i = 0; i < N; ++i)
      ynew[i] = y[i] + hstep * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const double s_new = last_in_piece ? next_break : s + hstep;
    k7 = rhs(s_new, ynew, piece);
    ++st.evaluations;

    double err = 0.0;
    bool ok = finite<N>(ynew) && finite<N>(k7);
    if (ok) {
      for (int i = 0; i < N; ++i) {
        const cplx e = hstep * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = std::abs(e) / sc;
        err += r * r;
      }
      err = std::sqrt(err / N);
      ok = std::isfinite(err);
    }
    if (!ok) {
      ++st.rejected;
      h = 0.2 * hstep;
      rejected_last = true;
      continue;
    }

    if (err <= 1.0) {
      ++st.accepted;
      s = s_new;
      y = ynew;
      k1 = k7;
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      // A step shortened by a breakpoint says little about the next one.
      if (!(last_in_piece && hstep < h)) h = std::min(ctl.max_step, hstep * fac);
      err_prev = std::max(err, 1e-4);
      rejected_last = false;
      const StepAction act = observer(s, y);
      if (act == StepAction::Stop) return RkStatus::Stopped;
      const long new_piece = piece_of(s);
      if (act == StepAction::Restart || new_piece != piece) {
        piece = new_piece;
        if (s >= s1) break;
        k1 = rhs(s, y, piece);
        ++st.evaluations;
        if (!finite<N>(k1)) return RkStatus::NonFinite;
      }
    } else {
      ++st.rejected;
      const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h = hstep * fac;
      rejected_last = true;
    }
  }
  return RkStatus::Completed;
}

}  // namespace blowup::detail
