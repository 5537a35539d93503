#include "blowup/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kRootMergeTolerance = 1e-6;
constexpr double kSemisimpleTolerance = 1e-10;

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
  return r;
}

std::vector<cplx> derivative(const std::vector<cplx>& c) {
  std::vector<cplx> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

std::vector<cplx> trim(std::vector<cplx> c, double rel) {
  double mx = 0.0;
  for (const auto& v : c) mx = std::max(mx, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= rel * mx) c.pop_back();
  return c;
}

struct RootCluster {
  cplx root;
  int multiplicity;
};

std::vector<RootCluster> root_clusters(const std::vector<cplx>& coeffs_in) {
  const std::vector<cplx> c = trim(coeffs_in, 1e-14);
  if (c.size() <= 1) return {};
  const int d = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<cplx> raw(es.eigenvalues().data(), es.eigenvalues().data() + d);

  std::vector<RootCluster> out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    cplx sum = raw[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(raw[j] - raw[i]) < kRootMergeTolerance * std::max(1.0, std::abs(raw[i]))) {
        used[j] = true;
        sum += raw[j];
        ++mult;
      }
    }
    out.push_back({sum / static_cast<double>(mult), mult});
  }

  // Newton polishing, scaled by multiplicity; a step is kept only if it helps.
  const auto dc = derivative(c);
  for (auto& rc : out) {
    for (int it = 0; it < 3; ++it) {
      const cplx p = horner(c, rc.root), dp = horner(dc, rc.root);
      if (std::abs(dp) == 0.0) break;
      const cplx cand = rc.root - static_cast<double>(rc.multiplicity) * p / dp;
      if (std::abs(horner(c, cand)) <= std::abs(p)) rc.root = cand;
    }
  }
  return out;
}

// Coefficients of p(x0, y) as a polynomial in y.
std::vector<cplx> slice_in_y(const BivariatePolynomial& p, cplx x0) {
  std::vector<cplx> c(static_cast<std::size_t>(p.degree_y() + 1), 0.0);
  for (const auto& t : p.terms()) c[static_cast<std::size_t>(t.k)] += t.c * std::pow(x0, t.j);
  return c;
}

// Univariate coefficients of the terms with first exponent zero, indexed by the second.
std::vector<cplx> restrict_first_zero(const BivariatePolynomial& p) {
  std::vector<cplx> c;
  for (const auto& t : p.terms()) {
    if (t.j != 0) continue;
    if (c.size() <= static_cast<std::size_t>(t.k)) c.resize(static_cast<std::size_t>(t.k) + 1, 0.0);
    c[static_cast<std::size_t>(t.k)] += t.c;
  }
  return c;
}

cplx sylvester_resultant(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const int P = static_cast<int>(a.size()) - 1, Q = static_cast<int>(b.size()) - 1;
  const int n = P + Q;
  if (n == 0) return 1.0;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < Q; ++r)
    for (int i = 0; i <= P; ++i) S(r, r + i) = a[static_cast<std::size_t>(P - i)];
  for (int r = 0; r < P; ++r)
    for (int i = 0; i <= Q; ++i) S(Q + r, r + i) = b[static_cast<std::size_t>(Q - i)];
  return S.partialPivLu().determinant();
}

bool newton_polish(const PlanarField& F, Point& p) {
  for (int it = 0; it < 50; ++it) {
    const Point r = evaluate(F, p);
    const Mat2 J = jacobian(F, p[0], p[1]);
    const cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (std::abs(det) == 0.0) break;
    const cplx dx = (J[1][1] * r[0] - J[0][1] * r[1]) / det;
    const cplx dy = (-J[1][0] * r[0] + J[0][0] * r[1]) / det;
    p[0] -= dx;
    p[1] -= dy;
    if (std::max(std::abs(dx), std::abs(dy)) < 1e-15 * std::max(1.0, max_abs(p))) break;
  }
  return max_abs(evaluate(F, p)) < 1e-10;
}

bool contains_point(const std::vector<EquilibriumRecord>& v, Chart c, const Point& p) {
  for (const auto& e : v) {
    if (e.chart != c) continue;
    if (max_abs({e.location[0] - p[0], e.location[1] - p[1]}) < 1e-8 * std::max(1.0, max_abs(p)))
      return true;
  }
  return false;
}

void infinity_equilibria(const ChartSystem& sys, std::vector<EquilibriumRecord>& out) {
  const auto p0 = trim(restrict_first_zero(sys.uz_field.g), 0.0);
  const auto q0 = trim(restrict_first_zero(sys.vw_field.g), 0.0);
  if (p0.empty() || q0.empty())
    throw NumericalError("DegenerateSystem", "the line at infinity consists of equilibria");
  for (const auto& rc : root_clusters(p0)) {
    EquilibriumRecord e;
    e.chart = Chart::UZ;
    e.location = {0.0, rc.root};
    e.multiplicity = rc.multiplicity;
    out.push_back(e);
  }
  for (const auto& rc : root_clusters(q0)) {
    if (std::abs(rc.root) < 1e-12) {
      EquilibriumRecord e;
      e.chart = Chart::VW;
      e.location = {0.0, 0.0};
      e.multiplicity = rc.multiplicity;
      out.push_back(e);
      continue;
    }
    const Point as_uz{0.0, 1.0 / rc.root};
    if (contains_point(out, Chart::UZ, as_uz)) continue;
    EquilibriumRecord e;
    e.chart = Chart::UZ;
    e.location = as_uz;
    e.multiplicity = rc.multiplicity;
    out.push_back(e);
  }
}

void finite_equilibria(const ChartSystem& sys, std::vector<EquilibriumRecord>& out) {
  const PlanarField& F = sys.xy_field;
  const auto& f = F.f;
  const auto& g = F.g;
  auto add = [&](Point p, int mult) {
    if (!newton_polish(F, p)) return;
    if (contains_point(out, Chart::XY, p)) return;
    EquilibriumRecord e;
    e.chart = Chart::XY;
    e.location = p;
    e.multiplicity = mult;
    out.push_back(e);
  };

  if (f.is_zero() || g.is_zero()) {
    const auto& other = f.is_zero() ? g : f;
    if (other.degree() > 0) throw NumericalError("DegenerateSystem", "a component vanishes identically");
    return;
  }
  const int P = f.degree_y(), Q = g.degree_y();
  if (P == 0 && Q == 0) {
    // Both depend on x only: any common root is a vertical line of equilibria.
    std::vector<cplx> fx(static_cast<std::size_t>(f.degree_x() + 1), 0.0);
    for (const auto& t : f.terms()) fx[static_cast<std::size_t>(t.j)] += t.c;
    for (const auto& rc : root_clusters(fx))
      if (std::abs(g(rc.root, 0.0)) < 1e-10 * std::max(1.0, g.max_abs_coefficient()))
        throw NumericalError("DegenerateSystem", "a vertical line consists of equilibria");
    return;
  }

  const int D = std::max(1, f.degree() * g.degree());
  const int N = D + 1;
  std::vector<cplx> samples(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    const cplx x = std::polar(1.0, 2.0 * std::numbers::pi * n / N);
    samples[static_cast<std::size_t>(n)] = sylvester_resultant(slice_in_y(f, x), slice_in_y(g, x));
  }
  const double scale = std::pow(std::max(1.0, f.max_abs_coefficient()), Q) * std::pow(std::max(1.0, g.max_abs_coefficient()), P);
  double mx = 0.0;
  for (const auto& v : samples) mx = std::max(mx, std::abs(v));
  if (mx < 1e-10 * scale)
    throw NumericalError("DegenerateSystem", "f and g share a common factor; a curve consists of equilibria");

  std::vector<cplx> res(static_cast<std::size_t>(N), 0.0);
  for (int k = 0; k < N; ++k) {
    cplx acc = 0.0;
    for (int n = 0; n < N; ++n)
      acc += samples[static_cast<std::size_t>(n)] * std::polar(1.0, -2.0 * std::numbers::pi * n * k / N);
    res[static_cast<std::size_t>(k)] = acc / static_cast<double>(N);
  }
  res = trim(res, 1e-11);

  for (const auto& rc : root_clusters(res)) {
    const auto fy = trim(slice_in_y(f, rc.root), 1e-11);
    const auto gy = trim(slice_in_y(g, rc.root), 1e-11);
    const bool f_flat = fy.size() <= 1, g_flat = gy.size() <= 1;
    if (f_flat && g_flat) {
      const bool f_zero = fy.empty() || std::abs(fy[0]) < 1e-10;
      const bool g_zero = gy.empty() || std::abs(gy[0]) < 1e-10;
      if (f_zero && g_zero) throw NumericalError("DegenerateSystem", "a vertical line consists of equilibria");
      continue;
    }
    const auto& poly = f_flat ? gy : fy;
    for (const auto& yr : root_clusters(poly)) add({rc.root, yr.root}, rc.multiplicity);
  }
}

double distance_to_segment(cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(a);
  const double s = std::clamp(-(std::conj(d) * a).real() / len2, 0.0, 1.0);
  return std::abs(a + s * d);
}

}  // namespace

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Poincare: return "Poincare";
    case Domain::Siegel: return "Siegel";
    case Domain::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string to_string(ResonanceKind r) {
  switch (r) {
    case ResonanceKind::Nonresonant: return "Nonresonant";
    case ResonanceKind::Resonant: return "Resonant";
    case ResonanceKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  std::vector<cplx> out;
  for (const auto& rc : root_clusters(coeffs))
    for (int i = 0; i < rc.multiplicity; ++i) out.push_back(rc.root);
  return out;
}

std::vector<EquilibriumRecord> find_equilibria(const ChartSystem& system, EquilibriumSearch search) {
  std::vector<EquilibriumRecord> out;
  if (search != EquilibriumSearch::InfinityOnly) finite_equilibria(system, out);
  if (search != EquilibriumSearch::FiniteOnly) infinity_equilibria(system, out);
  return out;
}

std::optional<std::pair<long, long>> rational_spectral_quotient(double lambda, double tol, int denominator_bound) {
  if (!std::isfinite(lambda)) return std::nullopt;
  const double sign = lambda < 0 ? -1.0 : 1.0;
  double x = std::abs(lambda);
  // Convergents h/k via the standard recurrence.
  long h_prev = 1, h = static_cast<long>(std::floor(x));
  long k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int guard = 0; guard < 64; ++guard) {
    if (k > denominator_bound) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) < tol) {
      const long g = std::gcd(h, k);
      return std::make_pair(static_cast<long>(sign) * (h / g), k / g);
    }
    if (frac < 1e-300) break;
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - std::floor(inv);
    const long h_next = a * h + h_prev, k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return std::nullopt;
}

EquilibriumRecord classify_spectrum(const ChartSystem& system, EquilibriumRecord eq, double tol,
                                    int denominator_bound) {
  const PlanarField& F = system.field(eq.chart);
  const Mat2 J = jacobian(F, eq.location[0], eq.location[1]);
  const double jscale = std::max({std::abs(J[0][0]), std::abs(J[0][1]), std::abs(J[1][0]), std::abs(J[1][1])});

  cplx l1, l2;
  if (std::abs(J[0][1]) <= 1e-14 * jscale || std::abs(J[1][0]) <= 1e-14 * jscale) {
    l1 = J[0][0];
    l2 = J[1][1];
  } else {
    const cplx tr = J[0][0] + J[1][1];
    const cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx a = 0.5 * (tr + disc), b = 0.5 * (tr - disc);
    // Recover the smaller root from the product to avoid cancellation.
    if (std::abs(a) < std::abs(b)) std::swap(a, b);
    if (std::abs(a) > 0.0) b = det / a;
    if (std::abs(b - J[0][0]) < std::abs(a - J[0][0])) std::swap(a, b);
    l1 = a;
    l2 = b;
  }
  eq.eigenvalues = {l1, l2};
  const double M = std::max(std::abs(l1), std::abs(l2));

  if (std::abs(l1 - l2) > kSemisimpleTolerance * std::max(1.0, M)) {
    eq.semisimple = true;
  } else {
    const double off = std::max({std::abs(J[0][1]), std::abs(J[1][0]), std::abs(J[0][0] - J[1][1])});
    eq.semisimple = off <= kSemisimpleTolerance * std::max(1.0, M);
  }

  eq.rational_quotient.reset();
  eq.note.clear();
  if (M == 0.0 || std::min(std::abs(l1), std::abs(l2)) < tol * M) {
    eq.domain = Domain::Degenerate;
    eq.resonance = {ResonanceKind::Indeterminate, 0};
    eq.spectral_quotient = std::abs(l2) > 0.0 ? l1 / l2 : cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    eq.classified = true;
    return eq;
  }
  const cplx lam = l1 / l2;
  eq.spectral_quotient = lam;
  eq.domain = distance_to_segment(l1, l2) > tol * M ? Domain::Poincare : Domain::Siegel;

  if (std::abs(lam.imag()) > tol * std::max(1.0, std::abs(lam))) {
    eq.resonance = {ResonanceKind::Nonresonant, 0};
  } else {
    const double lr = lam.real();
    eq.rational_quotient = rational_spectral_quotient(lr, tol, denominator_bound);
    if (eq.domain == Domain::Poincare) {
      // lambda > 0: resonant iff lambda or 1/lambda is an integer >= 2, which a
      // nearest-integer test decides without a denominator bound.
      const double big = std::max(lr, 1.0 / lr);
      const double n = std::round(big);
      if (n >= 2.0 && std::abs(big - n) < tol * std::max(1.0, n))
        eq.resonance = {ResonanceKind::Resonant, static_cast<int>(n)};
      else
        eq.resonance = {ResonanceKind::Nonresonant, 0};
    } else if (eq.rational_quotient) {
      // lambda = -p/q gives lambda_1 = (q+1) lambda_1 + p lambda_2.
      const long p = std::abs(eq.rational_quotient->first), q = eq.rational_quotient->second;
      eq.resonance = {ResonanceKind::Resonant, static_cast<int>(p + q + 1)};
      eq.note =
          "Siegel side: every rational quotient is reported resonant; the order is that of the "
          "lattice relation lambda_1 = (q+1) lambda_1 + p lambda_2";
    } else {
      eq.resonance = {ResonanceKind::Indeterminate, 0};
      eq.note = "no rational quotient within tolerance at the denominator bound; irrationality not certified";
    }
  }
  eq.classified = true;
  return eq;
}

std::optional<EquilibriumRecord> express_in_chart(const EquilibriumRecord& eq, Chart target) {
  auto p = convert(eq.chart, target, eq.location);
  if (!p) return std::nullopt;
  EquilibriumRecord r;
  r.chart = target;
  r.location = *p;
  r.multiplicity = eq.multiplicity;
  return r;
}

std::vector<SmallDivisor> small_divisor_scan(const EquilibriumRecord& eq, int max_order) {
  std::vector<SmallDivisor> out;
  const cplx l1 = eq.eigenvalues[0], l2 = eq.eigenvalues[1];
  for (int n = 2; n <= max_order; ++n) {
    SmallDivisor best;
    best.order = n;
    best.magnitude = std::numeric_limits<double>::infinity();
    for (int a1 = 0; a1 <= n; ++a1) {
      const int a2 = n - a1;
      const cplx comb = static_cast<double>(a1) * l1 + static_cast<double>(a2) * l2;
      for (int iota = 0; iota < 2; ++iota) {
        const double mag = std::abs((iota == 0 ? l1 : l2) - comb);
        if (mag < best.magnitude) {
          best.iota = iota;
          best.alpha1 = a1;
          best.alpha2 = a2;
          best.magnitude = mag;
        }
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace blowup
