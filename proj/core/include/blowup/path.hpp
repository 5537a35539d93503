#pragma once

#include <vector>

#include "blowup/polynomial.hpp"

namespace blowup {

struct Segment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  cplx from, to;            // Line
  cplx center;              // Arc
  double radius = 0.0;      // Arc
  double angle_from = 0.0;  // Arc, radians
  double angle_to = 0.0;    // Arc, radians

  static Segment line(cplx a, cplx b);
  static Segment arc(cplx center, double radius, double angle_from, double angle_to);

  // sigma in [0, 1]
  cplx at(double sigma) const;
  cplx derivative(double sigma) const;
  cplx start() const { return at(0.0); }
  cplx end() const { return at(1.0); }
  double length() const;
};

// Piecewise smooth curve in the complex plane, traversed `cycles` times.
// Path parameter s runs over [0, segments * cycles]; segment i of cycle c owns
// s in [c*n + i, c*n + i + 1].
struct TimePath {
  std::vector<Segment> segments;
  int cycles = 1;

  static TimePath line(cplx a, cplx b);
  static TimePath circle(cplx center, double radius, double start_angle, int cycles = 1,
                         bool counterclockwise = true);

  double s_end() const { return static_cast<double>(segments.size()) * cycles; }
  cplx at(double s) const;
  cplx derivative(double s) const;
  // Same, but evaluated on the given piece floor(s) even at its right end, where the
  // one-argument forms would already report the next piece.
  cplx at(double s, long piece) const;
  cplx derivative(double s, long piece) const;
  cplx start() const;
  cplx end() const;
  double length() const;  // one traversal
  bool closed() const;
  TimePath reversed() const;

  // Throws ValidationError when segments do not join, radii are not positive,
  // or cycles > 1 on an open path.
  void validate() const;
};

inline constexpr double kPathJoinTolerance = 1e-12;

}  // namespace blowup
