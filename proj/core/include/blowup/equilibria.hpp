#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/charts.hpp"

namespace blowup {

enum class Domain { Poincare, Siegel, Degenerate };
enum class ResonanceKind { Nonresonant, Resonant, Indeterminate };

struct Resonance {
  ResonanceKind kind = ResonanceKind::Indeterminate;
  int order = 0;  // |alpha| of the detected relation when Resonant
};

std::string to_string(Domain d);
std::string to_string(ResonanceKind r);

// Eigenvalue ordering: at an equilibrium on the line at infinity of a blow-up chart,
// lambda_1 belongs to the first (normal, u or v) direction and lambda_2 to the
// direction along the line at infinity. Elsewhere lambda_1 is the eigenvalue closest
// to J_11.
struct EquilibriumRecord {
  Chart chart = Chart::XY;
  Point location{};
  int multiplicity = 1;  // root multiplicity found during the search
  bool classified = false;
  std::array<cplx, 2> eigenvalues{};
  cplx spectral_quotient;
  bool semisimple = true;
  Domain domain = Domain::Degenerate;
  Resonance resonance;
  std::optional<std::pair<long, long>> rational_quotient;
  std::string note;
};

enum class EquilibriumSearch { FiniteOnly, InfinityOnly, All };

// Infinity equilibria are returned in UZ (z = e) and, for the point z = infinity only,
// in VW (w = 0). Finite ones are returned in XY.
// Throws NumericalError "DegenerateSystem" when a whole curve consists of equilibria.
std::vector<EquilibriumRecord> find_equilibria(const ChartSystem& system, EquilibriumSearch search);

EquilibriumRecord classify_spectrum(const ChartSystem& system, EquilibriumRecord eq, double tol = 1e-9,
                                    int denominator_bound = 100);

// First continued-fraction convergent p/q, q <= denominator_bound, with |lambda - p/q| < tol.
std::optional<std::pair<long, long>> rational_spectral_quotient(double lambda, double tol,
                                                                int denominator_bound);

// Same equilibrium seen from another chart; nullopt when that chart misses the point.
std::optional<EquilibriumRecord> express_in_chart(const EquilibriumRecord& eq, Chart target);

// Minimum of |lambda_iota - alpha . lambda| over |alpha| = order, for 2 <= order <= max_order.
struct SmallDivisor {
  int order = 0;
  int iota = 0;  // 0 or 1
  int alpha1 = 0;
  int alpha2 = 0;
  double magnitude = 0.0;
};

std::vector<SmallDivisor> small_divisor_scan(const EquilibriumRecord& eq, int max_order = 50);

// Roots of sum coeffs[i] z^i by companion-matrix eigenvalues plus Newton polishing.
// Leading coefficients below 1e-14 relative to the largest are dropped.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

}  // namespace blowup
