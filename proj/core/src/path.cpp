#include "blowup/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

namespace {
constexpr cplx kI{0.0, 1.0};
}

Segment Segment::line(cplx a, cplx b) {
  Segment s;
  s.kind = Kind::Line;
  s.from = a;
  s.to = b;
  return s;
}

Segment Segment::arc(cplx center, double radius, double angle_from, double angle_to) {
  Segment s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.angle_from = angle_from;
  s.angle_to = angle_to;
  return s;
}

cplx Segment::at(double sigma) const {
  if (kind == Kind::Line) {
    // Exact endpoints at sigma = 0 and 1.
    if (sigma == 1.0) return to;
    return from + sigma * (to - from);
  }
  const double th = angle_from + sigma * (angle_to - angle_from);
  return center + radius * std::polar(1.0, th);
}

cplx Segment::derivative(double sigma) const {
  if (kind == Kind::Line) return to - from;
  const double th = angle_from + sigma * (angle_to - angle_from);
  return kI * radius * (angle_to - angle_from) * std::polar(1.0, th);
}

double Segment::length() const {
  if (kind == Kind::Line) return std::abs(to - from);
  return radius * std::abs(angle_to - angle_from);
}

TimePath TimePath::line(cplx a, cplx b) {
  TimePath p;
  p.segments.push_back(Segment::line(a, b));
  return p;
}

TimePath TimePath::circle(cplx center, double radius, double start_angle, int cycles,
                          bool counterclockwise) {
  TimePath p;
  const double sweep = counterclockwise ? 2.0 * std::numbers::pi : -2.0 * std::numbers::pi;
  p.segments.push_back(Segment::arc(center, radius, start_angle, start_angle + sweep));
  p.cycles = cycles;
  return p;
}

namespace {

// Locate segment index and local parameter for global s.
std::pair<std::size_t, double> locate(const TimePath& p, double s) {
  const std::size_t n = p.segments.size();
  const double total = p.s_end();
  s = std::clamp(s, 0.0, total);
  double idx = std::floor(s);
  double sigma = s - idx;
  if (idx >= total) {
    idx = total - 1.0;
    sigma = 1.0;
  }
  const std::size_t seg = static_cast<std::size_t>(idx) % n;
  return {seg, sigma};
}

}  // namespace

cplx TimePath::at(double s) const {
  auto [seg, sigma] = locate(*this, s);
  return segments[seg].at(sigma);
}

cplx TimePath::derivative(double s) const {
  auto [seg, sigma] = locate(*this, s);
  return segments[seg].derivative(sigma);
}

cplx TimePath::at(double s, long piece) const {
  const auto& seg = segments[static_cast<std::size_t>(piece) % segments.size()];
  return seg.at(std::clamp(s - static_cast<double>(piece), 0.0, 1.0));
}

cplx TimePath::derivative(double s, long piece) const {
  const auto& seg = segments[static_cast<std::size_t>(piece) % segments.size()];
  return seg.derivative(std::clamp(s - static_cast<double>(piece), 0.0, 1.0));
}

cplx TimePath::start() const { return segments.front().start(); }
cplx TimePath::end() const { return segments.back().end(); }

double TimePath::length() const {
  double L = 0.0;
  for (const auto& s : segments) L += s.length();
  return L;
}

bool TimePath::closed() const { return std::abs(end() - start()) < kPathJoinTolerance * std::max(1.0, std::abs(start())); }

TimePath TimePath::reversed() const {
  TimePath r;
  r.cycles = cycles;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    Segment s = *it;
    if (s.kind == Segment::Kind::Line)
      std::swap(s.from, s.to);
    else
      std::swap(s.angle_from, s.angle_to);
    r.segments.push_back(s);
  }
  return r;
}

void TimePath::validate() const {
  if (segments.empty()) throw ValidationError("InvalidPath", "time path has no segments");
  if (cycles < 1) throw ValidationError("InvalidPath", "cycles must be positive");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.kind == Segment::Kind::Arc && !(s.radius > 0.0))
      throw ValidationError("InvalidPath", "arc " + std::to_string(i) + " has nonpositive radius");
    if (i + 1 < segments.size()) {
      const cplx a = s.end(), b = segments[i + 1].start();
      if (std::abs(a - b) > kPathJoinTolerance * std::max(1.0, std::abs(a)))
        throw ValidationError("InvalidPath",
                              "segments " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not join");
    }
  }
  if (cycles > 1 && !closed())
    throw ValidationError("InvalidPath", "a path traversed more than once must be closed");
}

}  // namespace blowup
