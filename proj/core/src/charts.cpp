#include "blowup/charts.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kChartDenominatorFloor = 1e-200;

cplx ipow(cplx z, int n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// u^m p(1/u, z/u) as a polynomial in (u, z).
BivariatePolynomial lift_uz(const BivariatePolynomial& p, int m) {
  BivariatePolynomial::TermMap t;
  for (const auto& term : p.terms()) t[{m - term.j - term.k, term.k}] += term.c;
  return BivariatePolynomial(t);
}

// v^m p(w/v, 1/v) as a polynomial in (v, w).
BivariatePolynomial lift_vw(const BivariatePolynomial& p, int m) {
  BivariatePolynomial::TermMap t;
  for (const auto& term : p.terms()) t[{m - term.j - term.k, term.j}] += term.c;
  return BivariatePolynomial(t);
}

}  // namespace

std::string to_string(Chart c) {
  switch (c) {
    case Chart::XY: return "XY";
    case Chart::UZ: return "UZ";
    case Chart::VW: return "VW";
  }
  return "?";
}

Chart chart_from_string(const std::string& s) {
  std::string up = s;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "XY") return Chart::XY;
  if (up == "UZ") return Chart::UZ;
  if (up == "VW") return Chart::VW;
  throw ValidationError("ParseError", "unknown chart '" + s + "' (expected XY, UZ or VW)");
}

cplx ChartClock::operator()(const Point& p) const {
  return ipow(p[0], exponent) * factor(p[0], p[1]);
}

const PlanarField& ChartSystem::field(Chart c) const {
  switch (c) {
    case Chart::XY: return xy_field;
    case Chart::UZ: return uz_field;
    case Chart::VW: return vw_field;
  }
  return xy_field;
}

const ChartClock& ChartSystem::clock(Chart c) const {
  switch (c) {
    case Chart::XY: return xy_clock;
    case Chart::UZ: return uz_clock;
    case Chart::VW: return vw_clock;
  }
  return xy_clock;
}

ChartSystem to_charts(const PlanarField& field) {
  return to_charts(field, BivariatePolynomial::constant(1.0));
}

ChartSystem to_charts(const PlanarField& field, const BivariatePolynomial& xy_multiplier) {
  if (field.is_zero()) throw ValidationError("ZeroField", "cannot compactify the zero vector field");
  if (xy_multiplier.is_zero())
    throw ValidationError("ZeroMultiplier", "Euler multiplier must not vanish identically");
  const int m = std::max({field.degree_m, field.f.degree(), field.g.degree(), 1});

  const auto u = BivariatePolynomial::x();
  const auto z = BivariatePolynomial::y();
  const BivariatePolynomial f1 = lift_uz(field.f, m), g1 = lift_uz(field.g, m);
  const BivariatePolynomial f2 = lift_vw(field.f, m), g2 = lift_vw(field.g, m);

  ChartSystem s;
  s.xy_field = field;
  s.xy_field.degree_m = m;
  s.uz_field = make_field(-(u * f1), g1 - z * f1);
  // In (v, w) the first variable is v and the second is w.
  s.vw_field = make_field(-(u * g2), f2 - z * g2);
  s.euler_exponent = m - 1;

  const int d = xy_multiplier.degree();
  s.xy_clock = ChartClock{0, xy_multiplier};
  s.uz_clock = ChartClock{m - 1 - d, lift_uz(xy_multiplier, d)};
  s.vw_clock = ChartClock{m - 1 - d, lift_vw(xy_multiplier, d)};
  return s;
}

HomogenizedField homogenize(const PlanarField& field) {
  const int m = std::max({field.degree_m, field.f.degree(), field.g.degree(), 1});
  TrivariatePolynomial::TermMap f, g, h;
  f[{1, 0, m - 1}] += 1.0;
  g[{0, 1, m - 1}] += 1.0;
  for (const auto& t : field.f.terms()) f[{t.j, t.k, m - t.j - t.k}] += t.c;
  for (const auto& t : field.g.terms()) g[{t.j, t.k, m - t.j - t.k}] += t.c;
  h[{0, 0, m}] = 1.0;
  return {TrivariatePolynomial(f), TrivariatePolynomial(g), TrivariatePolynomial(h)};
}

Mat2 jacobian(const PlanarField& field, cplx x, cplx y) {
  Mat2 J;
  J[0][0] = field.f.dx()(x, y);
  J[0][1] = field.f.dy()(x, y);
  J[1][0] = field.g.dx()(x, y);
  J[1][1] = field.g.dy()(x, y);
  return J;
}

Point evaluate(const PlanarField& field, const Point& p) {
  return {field.f(p[0], p[1]), field.g(p[0], p[1])};
}

std::optional<Point> convert(Chart from, Chart to, const Point& p) {
  if (from == to) return p;
  auto ok = [](cplx d) { return std::abs(d) > kChartDenominatorFloor; };
  if (from == Chart::XY) {
    if (to == Chart::UZ) {
      if (!ok(p[0])) return std::nullopt;
      return Point{1.0 / p[0], p[1] / p[0]};
    }
    if (!ok(p[1])) return std::nullopt;
    return Point{1.0 / p[1], p[0] / p[1]};
  }
  if (from == Chart::UZ) {
    if (to == Chart::XY) {
      if (!ok(p[0])) return std::nullopt;
      return Point{1.0 / p[0], p[1] / p[0]};
    }
    // v = u/z, w = 1/z
    if (!ok(p[1])) return std::nullopt;
    return Point{p[0] / p[1], 1.0 / p[1]};
  }
  // from VW
  if (to == Chart::XY) {
    if (!ok(p[0])) return std::nullopt;
    return Point{p[1] / p[0], 1.0 / p[0]};
  }
  // u = v/w, z = 1/w
  if (!ok(p[1])) return std::nullopt;
  return Point{p[0] / p[1], 1.0 / p[1]};
}

Point push_vector(Chart from, Chart to, const Point& p, const Point& vec) {
  if (from == to) return vec;
  const cplx a = p[0], b = p[1], da = vec[0], db = vec[1];
  // Every overlap map has the form (1/a, b/a) or (b/a, 1/a) up to the order of outputs,
  // or (a/b, 1/b); derivatives below follow from the quotient rule.
  if ((from == Chart::XY && to == Chart::UZ) || (from == Chart::UZ && to == Chart::XY)) {
    // (a, b) -> (1/a, b/a)
    return {-da / (a * a), (db * a - b * da) / (a * a)};
  }
  if (from == Chart::XY && to == Chart::VW) {
    // (x, y) -> (1/y, x/y)
    return {-db / (b * b), (da * b - a * db) / (b * b)};
  }
  if (from == Chart::VW && to == Chart::XY) {
    // (v, w) -> (w/v, 1/v)
    return {(db * a - b * da) / (a * a), -da / (a * a)};
  }
  // UZ <-> VW: (a, b) -> (a/b, 1/b)
  return {(da * b - a * db) / (b * b), -db / (b * b)};
}

Point original_velocity(const ChartSystem& sys, Chart c, const Point& p) {
  const Point F = evaluate(sys.field(c), p);
  const cplx rho = sys.clock(c)(p);
  return {F[0] / rho, F[1] / rho};
}

double max_abs(const Point& p) { return std::max(std::abs(p[0]), std::abs(p[1])); }

double norm2(const Point& p) { return std::sqrt(std::norm(p[0]) + std::norm(p[1])); }

}  // namespace blowup
