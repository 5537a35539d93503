#pragma once

#include <array>
#include <optional>
#include <string>

#include "blowup/polynomial.hpp"

namespace blowup {

// XY: original chart (x, y), time t.
// UZ: blow-up chart u = 1/x, z = y/x, time t1 with dt = rho_uz dt1.
// VW: blow-up chart v = 1/y, w = x/y, time t2 with dt = rho_vw dt2.
enum class Chart { XY, UZ, VW };

std::string to_string(Chart c);
Chart chart_from_string(const std::string& s);

using Point = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

// Time multiplier of a chart: rho(p) = p[0]^exponent * factor(p).
// In the blow-up charts without an extra Euler multiplier this is u^{m-1} (resp. v^{m-1}).
struct ChartClock {
  int exponent = 0;
  BivariatePolynomial factor = BivariatePolynomial::constant(1.0);

  cplx operator()(const Point& p) const;
};

struct ChartSystem {
  PlanarField xy_field;
  PlanarField uz_field;
  PlanarField vw_field;
  int euler_exponent = 0;  // m - 1
  ChartClock xy_clock;
  ChartClock uz_clock;
  ChartClock vw_clock;

  const PlanarField& field(Chart c) const;
  const ChartClock& clock(Chart c) const;
  int degree() const { return xy_field.degree_m; }
};

// Builds the three chart fields. An optional Euler multiplier rho on the xy chart
// means the physical field is F / rho with dt = rho dt_xy.
ChartSystem to_charts(const PlanarField& field);
ChartSystem to_charts(const PlanarField& field, const BivariatePolynomial& xy_multiplier);

struct HomogenizedField {
  TrivariatePolynomial f;  // in (xi, eta, zeta)
  TrivariatePolynomial g;
  TrivariatePolynomial h;
};

HomogenizedField homogenize(const PlanarField& field);

Mat2 jacobian(const PlanarField& field, cplx x, cplx y);

// Field value in the chart's own time.
Point evaluate(const PlanarField& field, const Point& p);

// Coordinate overlap maps; nullopt when the target chart does not contain the point.
std::optional<Point> convert(Chart from, Chart to, const Point& p);

// Pushes a tangent vector at p along the coordinate change from -> to.
// Requires the target chart to contain p.
Point push_vector(Chart from, Chart to, const Point& p, const Point& vec);

// Velocity with respect to original time t: F_c(p) / rho_c(p).
Point original_velocity(const ChartSystem& sys, Chart c, const Point& p);

double max_abs(const Point& p);
double norm2(const Point& p);

}  // namespace blowup
