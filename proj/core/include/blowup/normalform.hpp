#pragma once

#include <vector>

#include "blowup/equilibria.hpp"

namespace blowup {

struct DenominatorEntry {
  int order = 0;  // |alpha|
  int iota = 0;   // component, 0 or 1
  int alpha1 = 0;
  int alpha2 = 0;
  cplx value;  // alpha . lambda - lambda_iota
};

// Local coordinates near the equilibrium p0:
//   p = p0 + T * Psi(y~),   Psi = identity + terms of degree 2..N,
// in which the field is diag(lambda_1, lambda_2) up to terms of degree > N.
// When the first linear column is an eigenvector and the first row of J is (lambda_1, 0),
// T is lower unitriangular so the invariant fiber line u = 0 maps to y~_1 = 0.
struct TruncatedTransform {
  int order_N = 8;
  Chart chart = Chart::UZ;
  Point base{};
  Mat2 linear{};          // T
  Mat2 linear_inverse{};  // T^-1
  std::array<cplx, 2> eigenvalues{};
  BivariatePolynomial psi_u, psi_z;
  BivariatePolynomial inverse_u, inverse_z;
  std::vector<DenominatorEntry> scan_log;
  double min_denominator = 0.0;
  double max_coefficient = 0.0;  // largest |coefficient| of Psi

  // Chart point from normal-form coordinates and back (the latter via the truncated inverse).
  Point to_chart(const Point& normal) const;
  Point to_normal(const Point& chart_point) const;
};

inline constexpr int kDefaultNormalFormOrder = 8;
inline constexpr int kMaxNormalFormOrder = 14;

// Throws NumericalError "ResonantAtOrder" (with the offending multi-index in the
// message) or "NotSemisimple"; ValidationError "InvalidOrder" for N outside [2, 14].
TruncatedTransform poincare_linearize(const ChartSystem& system, const EquilibriumRecord& eq,
                                      int order_N = kDefaultNormalFormOrder);

struct ConjugacyResidual {
  double max_residual = 0.0;  // at ball_radius
  double fitted_order = 0.0;  // log-log slope; +inf when the residual vanishes to rounding
  std::vector<double> radii;
  std::vector<double> residuals;
};

// Samples sample_count points on the sphere of each radius r, r/2, r/4 in normal-form
// coordinates (fixed seed) and measures |DPsi^-1 T^-1 F(p0 + T Psi) - Lambda y~|.
ConjugacyResidual conjugacy_residual(const ChartSystem& system, const EquilibriumRecord& eq,
                                     const TruncatedTransform& transform, double ball_radius,
                                     int sample_count = 64);

}  // namespace blowup
