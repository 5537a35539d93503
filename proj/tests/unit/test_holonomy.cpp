#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace blowup;

namespace {

constexpr cplx kI{0.0, 1.0};

DetourReport detour(const std::string& name, const ParameterMap& p, const Point& start, double r, int cycles) {
  const auto sys = catalog_get(name, p).charts();
  const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
  return masuda_detour(sys, eq, approach_blowup(sys, eq, start), r, cycles);
}

}  // namespace

TEST_SUITE("holonomy") {
  TEST_CASE("linear holonomy multiplier") {
    for (double lam : {0.5, 2.0 / 3.0, -1.0, (std::sqrt(5.0) - 1.0) / 2.0}) {
      CAPTURE(lam);
      const auto sys = catalog_get("linear_diag", {{"l1", lam}, {"l2", 1.0}}).charts();
      const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
      const auto h = holonomy_multiplier(sys, eq, 0.1);
      CHECK(std::abs(h.multiplier - std::exp(2.0 * std::numbers::pi * kI * lam)) < 1e-6);
      const auto cw = holonomy_multiplier(sys, eq, 0.1, {1e-2, 5e-3, 2.5e-3}, false);
      CHECK(std::abs(cw.multiplier - std::exp(-2.0 * std::numbers::pi * kI * lam)) < 1e-6);
    }
  }

  TEST_CASE("caricature saddle at a = 2 returns the fiber") {
    const auto sys = catalog_get("galerkin_symmetric", {{"a", 2.0}}).charts();
    const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    const auto h = holonomy_multiplier(sys, eq, 0.1, {1e-3});
    CHECK(std::abs(h.multiplier - 1.0) < 1e-6);
  }

  TEST_CASE("homogeneous field: multiplier from the residue formula") {
    const auto sys = catalog_get("homogeneous").charts();
    // P(z) = -z f1 + g1 = z - z^3 and f1 = 1 + z^2.
    for (double e : {0.0, 1.0, -1.0}) {
      CAPTURE(e);
      const cplx oracle = std::exp(2.0 * std::numbers::pi * kI * (-(1.0 + e * e) / (1.0 - 3.0 * e * e)));
      const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, e});
      const auto h = holonomy_multiplier(sys, eq, 0.1);
      CHECK(std::abs(h.multiplier - oracle) < 1e-6);
    }
  }

  TEST_CASE("no invariant fiber is reported") {
    // x' = x + y^2 does not vanish on x = 0.
    using P = BivariatePolynomial;
    const auto sys = to_charts(make_field(P::x() + P::monomial(0, 2), P::monomial(0, 1, -1.0)));
    const auto eq = test::equilibrium_at(sys, Chart::XY, {0.0, 0.0});
    CHECK_THROWS_AS(holonomy_multiplier(sys, eq, 0.1), NumericalError);
  }

  TEST_CASE("scalar blow-up detours close with w_t = m - 1") {
    for (int m = 2; m <= 4; ++m) {
      CAPTURE(m);
      const auto rep = detour("scalar_poly", {{"m", m}}, {0.5, 0.1}, 0.05, m - 1);
      CHECK(rep.closed);
      CHECK(rep.relative_discrepancy < 1e-7);
      CHECK(*rep.windings.w_t == m - 1);
      CHECK(*rep.windings.w_1 == 1);
      CHECK(rep.fit_exponent == m - 1);
      if (m > 2) CHECK(!detour("scalar_poly", {{"m", m}}, {0.5, 0.1}, 0.05, m - 2).closed);
    }
  }

  TEST_CASE("blow-up time of x' = x^2 from the fit") {
    // x(0) = 2 blows up at T = 1/2; the approach starts at u = 1/2 with t0 = 0.
    const auto rep = detour("scalar_poly", {{"m", 2}}, {0.5, 0.1}, 0.05, 1);
    CHECK(std::abs(rep.t_estimate - 0.5) < 1e-8);
  }

  TEST_CASE("rational node closes once the leaf exponent is integral") {
    // Linear leaf z = c u^(l2/l1) = c u^(3/2); u winds once per loop at m = 2, so z picks
    // up exp(3 pi i k) and the lifted loop first closes at k = 2.
    const ParameterMap p{{"l1", -2}, {"l2", -3}, {"m", 2}, {"eps", 0.5}};
    const auto rep = detour("linear_diag", p, {0.5, 0.1}, 1e-3, 4);
    REQUIRE(rep.cycle_discrepancy.size() == 4);
    CHECK(rep.cycle_discrepancy[0] > 1e-3);
    CHECK(rep.cycle_discrepancy[1] < 1e-6);
    CHECK(rep.cycle_discrepancy[2] > 1e-3);
    CHECK(rep.cycle_discrepancy[3] < 1e-6);
    const auto closed = detour("linear_diag", p, {0.5, 0.1}, 1e-3, 2);
    CHECK(closed.closed);
    CHECK(*closed.windings.w_t == 2);
    CHECK(*closed.windings.w_1 == 2);
    CHECK(*closed.windings.w_2 == 3);
  }

  TEST_CASE("Jordan block never closes") {
    const auto rep = detour("jordan_block", {}, {0.5, 0.1}, 0.05, 20);
    for (double d : rep.cycle_discrepancy) CHECK(d > 1e-3);
    CHECK(!rep.closed);
  }

  TEST_CASE("blow-up star alternates") {
    const auto sys = catalog_get("scalar_poly", {{"m", 3}}).charts();
    const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    const auto rep = masuda_detour(sys, eq, approach_blowup(sys, eq, {0.5, 0.1}), 0.05, 2);
    const auto star = blowup_star(sys, eq, rep);
    REQUIRE(star.size() == 4);
    for (std::size_t j = 0; j < star.size(); ++j)
      CHECK(star[j].kind == (j % 2 == 0 ? BranchKind::BlowDown : BranchKind::BlowUp));
    // Real-time approach from u = 1/2 > 0 is a blow-up branch along the positive axis.
    bool positive_up = false;
    for (const auto& b : star)
      positive_up = positive_up || (b.kind == BranchKind::BlowUp && std::abs(b.direction - 1.0) < 1e-6);
    CHECK(positive_up);
    const auto open = masuda_detour(sys, eq, approach_blowup(sys, eq, {0.5, 0.1}), 0.05, 1);
    CHECK_THROWS_AS(blowup_star(sys, eq, open), NumericalError);
  }

  TEST_CASE("argument validation") {
    const auto sys = catalog_get("scalar_poly").charts();
    const auto eq = test::equilibrium_at(sys, Chart::UZ, {0.0, 0.0});
    const auto ap = approach_blowup(sys, eq, {0.5, 0.1});
    CHECK_THROWS_AS(masuda_detour(sys, eq, ap, -1.0, 1), ValidationError);
    CHECK_THROWS_AS(masuda_detour(sys, eq, ap, 0.05, 0), ValidationError);
  }
}
