#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace blowup;
using P = BivariatePolynomial;

namespace {

// Independent oracles written out from the chart ODEs by hand.
struct Expected {
  cplx z, l1, l2;
};

std::vector<Expected> symmetric_oracle(double a) {
  const cplx e = 2.0 * std::sqrt(cplx{1.0 - 1.0 / a});
  return {{0.0, -1.0, a - 1.0}, {e, -a, 2.0 * (1.0 - a)}, {-e, -a, 2.0 * (1.0 - a)}};
}

std::vector<Expected> asymmetric_oracle(double b1, double beta) {
  const cplx sd = std::sqrt(cplx{1.0 + b1 * b1 * (1.0 - beta)});
  std::vector<Expected> out{{0.0, -0.25 * b1 * (beta + 3.0), -0.25 * b1 * (beta - 1.0)}};
  for (double s : {1.0, -1.0}) {
    const cplx e = 0.5 * (1.0 + s * sd) / b1;
    out.push_back({e, -e - b1, -e - 0.5 * b1 * (1.0 - beta)});
  }
  return out;
}

}  // namespace

TEST_SUITE("equilibria") {
  TEST_CASE("polynomial roots with multiplicity") {
    // (z - 1)^2 (z + 2) = z^3 - 3 z + 2
    auto r = polynomial_roots({2.0, -3.0, 0.0, 1.0});
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    REQUIRE(r.size() == 3);
    CHECK(std::abs(r[0] + 2.0) < 1e-10);
    CHECK(std::abs(r[1] - 1.0) < 1e-6);
    CHECK(std::abs(r[2] - 1.0) < 1e-6);
  }

  TEST_CASE("rational spectral quotient") {
    const auto q = rational_spectral_quotient(1.0 / 3.0 + 1e-12, 1e-9, 100);
    REQUIRE(q);
    CHECK(q->first == 1);
    CHECK(q->second == 3);
    CHECK(!rational_spectral_quotient((std::sqrt(5.0) - 1.0) / 2.0, 1e-9, 50));
    const auto neg = rational_spectral_quotient(-2.0 / 3.0, 1e-12, 100);
    REQUIRE(neg);
    CHECK(neg->first == -2);
    CHECK(neg->second == 3);
  }

  TEST_CASE("symmetric caricature spectra match the closed forms") {
    for (double a : {-0.5, 0.25, 2.0, 3.0, 5.0}) {
      CAPTURE(a);
      const auto sys = catalog_get("galerkin_symmetric", {{"a", a}}).charts();
      for (const auto& ex : symmetric_oracle(a)) {
        const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, ex.z});
        CHECK(std::abs(eq.eigenvalues[0] - ex.l1) < 1e-10);
        CHECK(std::abs(eq.eigenvalues[1] - ex.l2) < 1e-10);
        CHECK(eq.semisimple == (a != 2.0 || ex.z == 0.0));
      }
      // The origin quotient is 1 / (1 - a).
      const auto origin = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
      CHECK(std::abs(origin.spectral_quotient - 1.0 / (1.0 - a)) < 1e-10);
    }
  }

  TEST_CASE("asymmetric caricature spectra match the closed forms") {
    for (auto [b1, beta] : std::vector<std::pair<double, double>>{{1, 3}, {0.5, 2}, {2, -1}, {1, 0.5}, {1.5, 5}}) {
      CAPTURE(b1);
      CAPTURE(beta);
      const auto sys = catalog_get("galerkin_asymmetric", {{"b1", b1}, {"beta", beta}}).charts();
      for (const auto& ex : asymmetric_oracle(b1, beta)) {
        const auto eq = test::equilibrium_at(sys, Chart::VW, {0.0, ex.z});
        CHECK(std::abs(eq.eigenvalues[0] - ex.l1) < 1e-10);
        CHECK(std::abs(eq.eigenvalues[1] - ex.l2) < 1e-10);
      }
      const auto origin = test::equilibrium_at(sys, Chart::VW, {0.0, 0.0});
      CHECK(std::abs(origin.spectral_quotient - (beta + 3.0) / (beta - 1.0)) < 1e-10);
    }
  }

  TEST_CASE("domains and resonance") {
    const auto node = [](double l1, double l2) {
      const auto sys = catalog_get("linear_diag", {{"l1", l1}, {"l2", l2}}).charts();
      return test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    };
    const auto a = node(-2, -3);
    CHECK(a.domain == Domain::Poincare);
    CHECK(a.resonance.kind == ResonanceKind::Nonresonant);
    REQUIRE(a.rational_quotient);
    CHECK(a.rational_quotient->first == 2);
    CHECK(a.rational_quotient->second == 3);

    const auto b = node(-2, -1);
    CHECK(b.resonance.kind == ResonanceKind::Resonant);
    CHECK(b.resonance.order == 2);

    const auto c = node(1, -1);
    CHECK(c.domain == Domain::Siegel);
    CHECK(c.resonance.kind == ResonanceKind::Resonant);

    const auto d = node((std::sqrt(5.0) - 1.0) / 2.0, -1);
    CHECK(d.domain == Domain::Siegel);
    CHECK(d.resonance.kind == ResonanceKind::Indeterminate);
    CHECK(!d.note.empty());

    const auto sys = to_charts(make_field(P::monomial(1, 0, cplx{1.0, 1.0}), P::monomial(0, 1, 1.0)));
    const auto e = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    CHECK(e.resonance.kind == ResonanceKind::Nonresonant);
  }

  TEST_CASE("degenerate and non-semisimple") {
    const auto jordan = test::equilibrium_at(catalog_get("jordan_block").charts(), Chart::UZ, {0.0, 0.0});
    CHECK(!jordan.semisimple);
    CHECK(jordan.eigenvalues[0] == cplx{-1.0});
    // x' = x^2, y' = -y has a degenerate finite equilibrium at the origin.
    const auto origin = test::equilibrium_at(catalog_get("scalar_poly").charts(), Chart::XY, {0.0, 0.0});
    CHECK(origin.domain == Domain::Degenerate);
    CHECK(origin.multiplicity == 2);
    CHECK_THROWS_AS(find_equilibria(catalog_get("jordan_block").charts(), EquilibriumSearch::FiniteOnly), NumericalError);
  }

  TEST_CASE("cyclotomic roots and the point z = infinity") {
    const auto sys = catalog_get("cyclotomic", {{"m", 5}}).charts();
    const auto finite = find_equilibria(sys, EquilibriumSearch::FiniteOnly);
    CHECK(finite.size() == 5);
    for (int k = 0; k < 5; ++k) {
      const cplx root = std::polar(1.0, 2 * std::numbers::pi * k / 5);
      bool found = false;
      for (const auto& e : finite) found = found || std::abs(e.location[0] - root) < 1e-10;
      CHECK(found);
    }
    const auto homog = find_equilibria(catalog_get("galerkin_asymmetric").charts(), EquilibriumSearch::InfinityOnly);
    bool vw_origin = false;
    for (const auto& e : homog) vw_origin = vw_origin || (e.chart == Chart::VW && std::abs(e.location[1]) < 1e-12);
    CHECK(vw_origin);
  }

  TEST_CASE("charts agree on equilibria") {
    const auto sys = catalog_get("galerkin_symmetric", {{"a", 3.0}}).charts();
    const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 2.0 * std::sqrt(2.0 / 3.0)});
    const auto in_vw = express_in_chart(eq, Chart::VW);
    REQUIRE(in_vw);
    CHECK(std::abs(in_vw->location[1] - 1.0 / eq.location[1]) < 1e-12);
    CHECK(!express_in_chart(eq, Chart::XY));
  }

  TEST_CASE("small divisor scan") {
    const auto sys = catalog_get("linear_diag", {{"l1", -2}, {"l2", -3}}).charts();
    const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    const auto scan = small_divisor_scan(eq, 10);
    REQUIRE(scan.size() == 9);
    // Order 2: |alpha . lambda - lambda_iota| minimized by (2, 0) against lambda_2: |-4 + 3| = 1.
    CHECK(scan[0].order == 2);
    CHECK(std::abs(scan[0].magnitude - 1.0) < 1e-12);
  }
}
