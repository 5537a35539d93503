#include "blowup/normalform.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

Mat2 inverse(const Mat2& A) {
  const cplx det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  if (std::abs(det) == 0.0) throw NumericalError("NotSemisimple", "eigenvector matrix is singular");
  return {{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
}

// sum_(j,k) (j lambda_1 + k lambda_2) c_jk x^j y^k, i.e. DPsi applied to Lambda y~.
BivariatePolynomial euler_operator(const BivariatePolynomial& p, cplx l1, cplx l2) {
  BivariatePolynomial::TermMap t;
  for (const auto& term : p.terms()) t[{term.j, term.k}] += (static_cast<double>(term.j) * l1 + static_cast<double>(term.k) * l2) * term.c;
  return BivariatePolynomial(t);
}

BivariatePolynomial affine(cplx c, cplx a, cplx b) {
  BivariatePolynomial::TermMap t;
  t[{0, 0}] = c;
  t[{1, 0}] = a;
  t[{0, 1}] = b;
  return BivariatePolynomial(t);
}

// T^-1 F(p0 + T xi) as polynomials in xi.
std::pair<BivariatePolynomial, BivariatePolynomial> local_field(const PlanarField& F, const Point& p0,
                                                                const Mat2& T, const Mat2& Ti) {
  const auto X = affine(p0[0], T[0][0], T[0][1]);
  const auto Y = affine(p0[1], T[1][0], T[1][1]);
  const auto Ff = compose(F.f, X, Y);
  const auto Fg = compose(F.g, X, Y);
  return {Ti[0][0] * Ff + Ti[0][1] * Fg, Ti[1][0] * Ff + Ti[1][1] * Fg};
}

Mat2 eigenbasis(const Mat2& J, cplx l1, cplx l2) {
  const double scale = std::max({std::abs(J[0][0]), std::abs(J[0][1]), std::abs(J[1][0]), std::abs(J[1][1]), 1e-300});
  const bool distinct = std::abs(l1 - l2) > 1e-10 * std::max(std::abs(l1), std::abs(l2));
  if (std::abs(J[0][1]) <= 1e-14 * scale) {
    const cplx c = distinct ? J[1][0] / (l1 - l2) : cplx{0.0};
    return {{{1.0, 0.0}, {c, 1.0}}};
  }
  if (std::abs(J[1][0]) <= 1e-14 * scale) {
    const cplx d = distinct ? J[0][1] / (l2 - l1) : cplx{0.0};
    return {{{1.0, d}, {0.0, 1.0}}};
  }
  auto vec = [&](cplx l) {
    std::array<cplx, 2> a{J[0][1], l - J[0][0]}, b{l - J[1][1], J[1][0]};
    auto n = [](const std::array<cplx, 2>& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); };
    auto v = n(a) >= n(b) ? a : b;
    const double nv = n(v);
    return std::array<cplx, 2>{v[0] / nv, v[1] / nv};
  };
  const auto v1 = vec(l1), v2 = vec(l2);
  return {{{v1[0], v2[0]}, {v1[1], v2[1]}}};
}

}  // namespace

Point TruncatedTransform::to_chart(const Point& normal) const {
  const cplx a = psi_u(normal[0], normal[1]), b = psi_z(normal[0], normal[1]);
  return {base[0] + linear[0][0] * a + linear[0][1] * b, base[1] + linear[1][0] * a + linear[1][1] * b};
}

Point TruncatedTransform::to_normal(const Point& p) const {
  const cplx d0 = p[0] - base[0], d1 = p[1] - base[1];
  const cplx a = linear_inverse[0][0] * d0 + linear_inverse[0][1] * d1;
  const cplx b = linear_inverse[1][0] * d0 + linear_inverse[1][1] * d1;
  return {inverse_u(a, b), inverse_z(a, b)};
}

TruncatedTransform poincare_linearize(const ChartSystem& system, const EquilibriumRecord& eq_in, int order_N) {
  if (order_N < 2 || order_N > kMaxNormalFormOrder)
    throw ValidationError("InvalidOrder", "order_N must lie in [2, " + std::to_string(kMaxNormalFormOrder) + "]");
  const EquilibriumRecord eq = eq_in.classified ? eq_in : classify_spectrum(system, eq_in);
  if (!eq.semisimple) throw NumericalError("NotSemisimple", "the linearization is not semisimple");
  if (eq.domain == Domain::Degenerate)
    throw NumericalError("NotSemisimple", "a zero eigenvalue admits no Poincare linearization");

  TruncatedTransform tr;
  tr.order_N = order_N;
  tr.chart = eq.chart;
  tr.base = eq.location;
  const cplx l1 = eq.eigenvalues[0], l2 = eq.eigenvalues[1];
  tr.eigenvalues = {l1, l2};
  const double M = std::max(std::abs(l1), std::abs(l2));

  tr.min_denominator = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= order_N; ++n) {
    for (int a1 = 0; a1 <= n; ++a1) {
      const int a2 = n - a1;
      for (int iota = 0; iota < 2; ++iota) {
        const cplx den = static_cast<double>(a1) * l1 + static_cast<double>(a2) * l2 - (iota == 0 ? l1 : l2);
        tr.scan_log.push_back({n, iota, a1, a2, den});
        tr.min_denominator = std::min(tr.min_denominator, std::abs(den));
        if (std::abs(den) < 1e-8 * M)
          throw NumericalError("ResonantAtOrder", "resonance at order " + std::to_string(n) + ": lambda_" +
                                                      std::to_string(iota + 1) + " = " + std::to_string(a1) +
                                                      " lambda_1 + " + std::to_string(a2) + " lambda_2");
      }
    }
  }

  const Mat2 J = jacobian(system.field(eq.chart), eq.location[0], eq.location[1]);
  tr.linear = eigenbasis(J, l1, l2);
  tr.linear_inverse = inverse(tr.linear);
  auto [G0, G1] = local_field(system.field(eq.chart), eq.location, tr.linear, tr.linear_inverse);
  // The linear part is diag(lambda) up to rounding; use it exactly.
  const auto x = BivariatePolynomial::x(), y = BivariatePolynomial::y();
  G0 = G0 - G0.truncated(1) + l1 * x;
  G1 = G1 - G1.truncated(1) + l2 * y;

  tr.psi_u = x;
  tr.psi_z = y;
  for (int n = 2; n <= order_N; ++n) {
    const auto Ru = (compose(G0, tr.psi_u, tr.psi_z, n) - euler_operator(tr.psi_u, l1, l2)).homogeneous_part(n);
    const auto Rz = (compose(G1, tr.psi_u, tr.psi_z, n) - euler_operator(tr.psi_z, l1, l2)).homogeneous_part(n);
    BivariatePolynomial::TermMap du, dz;
    for (const auto& t : Ru.terms()) du[{t.j, t.k}] = t.c / (static_cast<double>(t.j) * l1 + static_cast<double>(t.k) * l2 - l1);
    for (const auto& t : Rz.terms()) dz[{t.j, t.k}] = t.c / (static_cast<double>(t.j) * l1 + static_cast<double>(t.k) * l2 - l2);
    tr.psi_u += BivariatePolynomial(du);
    tr.psi_z += BivariatePolynomial(dz);
  }
  tr.max_coefficient = std::max(tr.psi_u.max_abs_coefficient(), tr.psi_z.max_abs_coefficient());

  // Psi = id + h, so the inverse solves y~ = q - h(y~); N rounds fix every degree <= N.
  const auto hu = tr.psi_u - x, hz = tr.psi_z - y;
  tr.inverse_u = x;
  tr.inverse_z = y;
  for (int it = 0; it < order_N; ++it) {
    auto nu = x - compose(hu, tr.inverse_u, tr.inverse_z, order_N);
    auto nz = y - compose(hz, tr.inverse_u, tr.inverse_z, order_N);
    tr.inverse_u = std::move(nu);
    tr.inverse_z = std::move(nz);
  }
  return tr;
}

ConjugacyResidual conjugacy_residual(const ChartSystem& system, const EquilibriumRecord& eq,
                                     const TruncatedTransform& tr, double ball_radius, int sample_count) {
  if (!(ball_radius > 0.0) || ball_radius > 0.5)
    throw ValidationError("InvalidArgument", "ball_radius must lie in (0, 0.5]");
  if (sample_count < 1) throw ValidationError("InvalidArgument", "sample_count must be positive");
  (void)eq;

  const cplx l1 = tr.eigenvalues[0], l2 = tr.eigenvalues[1];
  auto [G0, G1] = local_field(system.field(tr.chart), tr.base, tr.linear, tr.linear_inverse);
  // Exact polynomial residual R = G o Psi - DPsi Lambda y~, no truncation.
  const auto R0 = compose(G0, tr.psi_u, tr.psi_z) - euler_operator(tr.psi_u, l1, l2);
  const auto R1 = compose(G1, tr.psi_u, tr.psi_z) - euler_operator(tr.psi_z, l1, l2);
  const auto pux = tr.psi_u.dx(), puy = tr.psi_u.dy(), pzx = tr.psi_z.dx(), pzy = tr.psi_z.dy();

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  std::vector<Point> dirs;
  for (int i = 0; i < sample_count; ++i) {
    Point d{cplx{normal(rng), normal(rng)}, cplx{normal(rng), normal(rng)}};
    const double n = norm2(d);
    dirs.push_back({d[0] / n, d[1] / n});
  }

  ConjugacyResidual out;
  const double M = std::max(std::abs(l1), std::abs(l2));
  for (double r : {ball_radius, ball_radius / 2, ball_radius / 4}) {
    double worst = 0.0;
    for (const auto& d : dirs) {
      const cplx a = r * d[0], b = r * d[1];
      const cplx r0 = R0(a, b), r1 = R1(a, b);
      const cplx j00 = pux(a, b), j01 = puy(a, b), j10 = pzx(a, b), j11 = pzy(a, b);
      const cplx det = j00 * j11 - j01 * j10;
      const Point res{(j11 * r0 - j01 * r1) / det, (-j10 * r0 + j00 * r1) / det};
      worst = std::max(worst, norm2(res));
    }
    out.radii.push_back(r);
    out.residuals.push_back(worst);
  }
  out.max_residual = out.residuals.front();

  // Residuals at rounding level carry no order information.
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * out.radii[i] * M;
    if (out.residuals[i] > floor) {
      lx.push_back(std::log(out.radii[i]));
      ly.push_back(std::log(out.residuals[i]));
    }
  }
  if (lx.size() < 2) {
    out.fitted_order = std::numeric_limits<double>::infinity();
  } else {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    out.fitted_order = sxy / sxx;
  }
  return out;
}

}  // namespace blowup
