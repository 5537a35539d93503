// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "blowup/blowup.hpp"
#include "commands.hpp"

using namespace blowup;
using json = nlohmann::json;
using P = BivariatePolynomial;

namespace {

// Pinned tolerances.
constexpr double kTreeSeconds = 1.0;
constexpr double kRiccatiPathTol = 1e-9;
constexpr double kRiccatiDetourTol = 1e-8;
constexpr double kPeriodTol = 1e-7;
constexpr double kHolonomyTol = 1e-6;
constexpr double kWindingLawTol = 1e-7;
constexpr double kRationalClosedTol = 1e-6;
constexpr double kRationalOpenMin = 0.1;
constexpr double kJordanOpenMin = 1e-3;
constexpr double kEnergyDriftTol = 1e-8;
constexpr double kDriftHalvingRatio = 0.75;  // drift(rel_tol / 2) / drift(rel_tol) must not exceed this
constexpr double kGalerkinTol = 1e-10;
constexpr double kNormalFormSlopeMargin = 0.5;
constexpr double kChartRelTol = 1e-10;
constexpr double kGoldenFirstMin = 0.3;
constexpr double kGoldenNearMax = 0.05;

constexpr cplx kI{0.0, 1.0};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

EquilibriumRecord at(const ChartSystem& sys, Chart chart, const Point& loc) {
  const auto search = chart == Chart::XY ? EquilibriumSearch::FiniteOnly : EquilibriumSearch::InfinityOnly;
  for (const auto& found : find_equilibria(sys, search)) {
    const auto e = express_in_chart(found, chart);
    if (e && std::abs(e->location[0] - loc[0]) < 1e-8 && std::abs(e->location[1] - loc[1]) < 1e-8)
      return classify_spectrum(sys, *e);
  }
  throw NumericalError("NotFound", "equilibrium not found");
}

cplx x_of(const Sample& s) { return (*convert(s.chart, Chart::XY, s.coords))[0]; }

Outcome trees() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run_command({"trees", "--max-m", "16"}, out, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (code != 0) return {false, "exit " + std::to_string(code)};
  std::vector<std::int64_t> got;
  const json doc = json::parse(out.str());
  for (const auto& r : doc["rows"]) got.push_back(r["count"].get<std::int64_t>());
  const std::vector<std::int64_t> want{1, 1, 2, 3, 6, 14, 34, 95, 280, 854, 2694, 8714, 28640, 95640, 323396};
  return {got == want && secs < kTreeSeconds, "15 counts " + std::string(got == want ? "match" : "differ") + " in " + g6(secs) + " s"};
}

Outcome riccati() {
  const auto sys = to_charts(make_field(P::monomial(2, 0), P::monomial(0, 1, -1.0)));
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.3, 2.0), A(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  int paths = 0;
  while (paths < 10) {
    const cplx x0 = std::polar(R(rng), A(rng)), T = 1.0 / x0;
    const cplx mid{U(rng), U(rng)}, end{U(rng), U(rng)};
    TimePath path;
    path.segments = {Segment::line(0.0, mid), Segment::line(mid, end)};
    // Distance from T to each segment.
    auto dist = [&](cplx a, cplx b) {
      const double s = std::clamp(std::real((T - a) * std::conj(b - a)) / std::norm(b - a), 0.0, 1.0);
      return std::abs(a + s * (b - a) - T);
    };
    if (std::min(dist(0.0, mid), dist(mid, end)) < 0.1) continue;
    ++paths;
    const auto tr = integrate_path(sys, Chart::XY, {x0, 0.0}, path);
    if (tr.terminated_reason != Termination::Completed) return {false, "path ended with " + to_string(tr.terminated_reason)};
    for (const auto& s : tr.samples) worst = std::max(worst, std::abs(x_of(s) - 1.0 / (-s.t + 1.0 / x0)));
  }
  TimePath semi;
  semi.segments = {Segment::line(0.0, 0.5), Segment::arc(1.0, 0.5, std::numbers::pi, 0.0), Segment::line(1.5, 2.0)};
  const auto tr = integrate_path(sys, Chart::XY, {1.0, 0.0}, semi);
  const double detour_err = std::abs(x_of(tr.back()) + 1.0);
  return {worst < kRiccatiPathTol && detour_err < kRiccatiDetourTol,
          "max path error " + g6(worst) + ", continuation error at t=2 " + g6(detour_err)};
}

Outcome imaginary_period() {
  const auto sys = catalog_get("riccati").charts();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const cplx x0{U(rng), U(rng)};
    const auto tr = integrate_path(sys, Chart::XY, {x0, 0.0}, TimePath::line(0.0, std::numbers::pi * kI));
    if (tr.terminated_reason != Termination::Completed) return {false, "orbit ended with " + to_string(tr.terminated_reason)};
    worst = std::max(worst, std::abs(x_of(tr.back()) - x0));
  }
  return {worst < kPeriodTol, "max return error after i*pi " + g6(worst)};
}

Outcome holonomy() {
  double worst = 0.0;
  for (double lam : {0.5, 2.0 / 3.0, -1.0, (std::sqrt(5.0) - 1.0) / 2.0}) {
    const auto sys = catalog_get("linear_diag", {{"l1", lam}, {"l2", 1.0}}).charts();
    const auto h = holonomy_multiplier(sys, at(sys, Chart::UZ, {0.0, 0.0}), 0.1);
    worst = std::max(worst, std::abs(h.multiplier - std::exp(2.0 * std::numbers::pi * kI * lam)));
  }
  return {worst < kHolonomyTol, "max multiplier deviation " + g6(worst)};
}

DetourReport detour(const std::string& name, const ParameterMap& p, const Point& start, double r, int cycles) {
  const auto sys = catalog_get(name, p).charts();
  const auto eq = at(sys, Chart::UZ, {0.0, 0.0});
  return masuda_detour(sys, eq, approach_blowup(sys, eq, start), r, cycles);
}

Outcome winding_law() {
  bool ok = true;
  std::string detail;
  for (int m = 2; m <= 4; ++m) {
    const auto rep = detour("scalar_poly", {{"m", m}}, {0.5, 0.1}, 0.05, m - 1);
    const int wt = rep.windings.w_t.value_or(-999), wu = rep.windings.w_1.value_or(-999);
    ok = ok && rep.relative_discrepancy < kWindingLawTol && wt == m - 1 && wu == 1;
    detail += "m=" + std::to_string(m) + ": (" + std::to_string(wt) + "," + std::to_string(wu) + ") rel " +
              g6(rep.relative_discrepancy) + (m < 4 ? "; " : "");
  }
  return {ok, detail};
}

Outcome rational_closure() {
  const auto rep = detour("linear_diag", {{"l1", -2}, {"l2", -3}, {"m", 2}, {"eps", 0.5}}, {0.5, 0.1}, 1e-3, 3);
  const auto& d = rep.cycle_discrepancy;
  if (d.size() != 3) return {false, "expected 3 cycle readings"};
  const bool ok = d[2] < kRationalClosedTol && d[0] > kRationalOpenMin && d[1] > kRationalOpenMin;
  return {ok, "relative discrepancy after 1, 2, 3 cycles: " + g6(d[0]) + ", " + g6(d[1]) + ", " + g6(d[2]) +
                  " (want > 0.1, > 0.1, < 1e-6)"};
}

Outcome jordan() {
  const auto rep = detour("jordan_block", {}, {0.5, 0.1}, 0.05, 20);
  double smallest = 1e300;
  for (double v : rep.cycle_discrepancy) smallest = std::min(smallest, v);
  return {rep.cycle_discrepancy.size() == 20 && smallest > kJordanOpenMin,
          "min relative discrepancy over 20 cycles " + g6(smallest)};
}

Outcome pendulum() {
  struct Case {
    const char* name;
    std::vector<cplx> G;
    int wt, wv, ww;
  };
  const std::vector<Case> cases{{"Weierstrass", {0.0, -6.0, 0.0, 2.0}, 1, 1, 3},
                                {"Duffing", {0.0, 0.0, -0.5, 0.0, 0.25}, 1, 2, 1},
                                {"m=4", {0.0, 0.0, 0.0, 0.0, 0.0, 1.0}, 3, 5, 3}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto w = pendulum_loop_windings(c.G);
    const bool hit = w.w_t == c.wt && w.w_v == c.wv && w.w_w == c.ww;
    ok = ok && hit;
    if (!detail.empty()) detail += "; ";
    detail += std::string(c.name) + " (" + std::to_string(w.w_t) + "," + std::to_string(w.w_v) + "," +
              std::to_string(w.w_w) + ")" + (hit ? "" : " want (" + std::to_string(c.wt) + "," + std::to_string(c.wv) + "," + std::to_string(c.ww) + ")");
  }
  return {ok, detail};
}

Outcome energy() {
  const auto entry = catalog_get("weierstrass");
  const auto sys = entry.charts();
  struct Rect {
    cplx corner, x0, y0;
    double w, h;
  };
  // Perimeters 4, 3.2, 2.
  const std::vector<Rect> rects{{{-0.5, -0.5}, {0.3, 0.2}, {1.0, -0.4}, 1.0, 1.0},
                                {{0.0, -0.2}, {-0.7, 0.1}, {0.5, 0.5}, 1.2, 0.4},
                                {{-0.3, 0.0}, {1.5, -0.3}, {-0.8, 0.2}, 0.5, 0.5}};
  double worst = 0.0, worst_ratio = 0.0;
  for (const auto& r : rects) {
    TimePath path;
    const cplx a = r.corner, b = a + r.w, c = a + cplx{r.w, r.h}, d = a + cplx{0.0, r.h};
    path.segments = {Segment::line(a, b), Segment::line(b, c), Segment::line(c, d), Segment::line(d, a)};
    auto ham = *entry.hamiltonian;
    ham.level_c = ham.H(r.x0, r.y0);
    double drift[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
      IntegrationConfig cfg;
      cfg.rel_tol /= (1 << k);
      cfg.abs_tol /= (1 << k);
      const auto tr = integrate_path(sys, Chart::XY, {r.x0, r.y0}, path, cfg, std::nullopt, a);
      if (tr.terminated_reason != Termination::Completed) return {false, "rectangle ended with " + to_string(tr.terminated_reason)};
      drift[k] = energy_drift(ham, tr);
    }
    worst = std::max(worst, drift[0]);
    worst_ratio = std::max(worst_ratio, drift[1] / drift[0]);
  }
  return {worst < kEnergyDriftTol && worst_ratio <= kDriftHalvingRatio,
          "max drift " + g6(worst) + ", worst drift ratio at half rel_tol " + g6(worst_ratio)};
}

Outcome galerkin() {
  double worst = 0.0;
  bool flags = true;
  for (double a : {-0.5, 0.25, 2.0, 3.0, 5.0}) {
    const auto sys = catalog_get("galerkin_symmetric", {{"a", a}}).charts();
    const cplx e = 2.0 * std::sqrt(cplx{1.0 - 1.0 / a});
    const auto origin = at(sys, Chart::UZ, {0.0, 0.0});
    worst = std::max(worst, std::abs(origin.spectral_quotient - 1.0 / (1.0 - a)));
    for (cplx z : {e, -e}) {
      const auto rec = at(sys, Chart::UZ, {0.0, z});
      worst = std::max(worst, std::abs(rec.spectral_quotient - 0.5 * a / (a - 1.0)));
      flags = flags && rec.semisimple == (a != 2.0);
    }
  }
  for (auto [b1, beta] : std::vector<std::pair<double, double>>{{1, 3}, {0.5, 2}, {2, -1}, {1, 0.5}, {1.5, 5}}) {
    const auto sys = catalog_get("galerkin_asymmetric", {{"b1", b1}, {"beta", beta}}).charts();
    const auto origin = at(sys, Chart::VW, {0.0, 0.0});
    worst = std::max(worst, std::abs(origin.spectral_quotient - (beta + 3.0) / (beta - 1.0)));
    const cplx sd = std::sqrt(cplx{1.0 + b1 * b1 * (1.0 - beta)});
    for (double s : {1.0, -1.0}) at(sys, Chart::VW, {0.0, 0.5 * (1.0 + s * sd) / b1});  // throws if absent
  }
  return {worst < kGalerkinTol && flags, "max quotient error " + g6(worst) + ", non-semisimple flags " + (flags ? "ok" : "wrong")};
}

Outcome normal_form() {
  constexpr int N = 8;
  const auto sys = catalog_get("galerkin_symmetric", {{"a", -0.5}}).charts();
  const auto eq = at(sys, Chart::UZ, {0.0, 0.0});
  const auto res = conjugacy_residual(sys, eq, poincare_linearize(sys, eq, N), 0.1);
  const auto bad = catalog_get("galerkin_symmetric", {{"a", 0.5}}).charts();
  bool resonant = false;
  try {
    poincare_linearize(bad, at(bad, Chart::UZ, {0.0, 0.0}), N);
  } catch (const NumericalError& e) {
    resonant = e.kind() == "ResonantAtOrder";
  }
  return {res.fitted_order >= N + kNormalFormSlopeMargin && resonant,
          "slope " + g6(res.fitted_order) + " on radii 0.1, 0.05, 0.025; a=1/2 " + (resonant ? "raises ResonantAtOrder" : "does not raise")};
}

Outcome chart_consistency() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(0.1, 10.0), ang(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  int systems = 0;
  for (const auto& info : catalog_list()) {
    ParameterMap p;
    for (const auto& r : info.required) p[r] = -1.5 - static_cast<double>(p.size());
    const auto sys = catalog_get(info.name, p).charts();
    ++systems;
    for (int i = 0; i < 100; ++i) {
      const Point xy{std::polar(mag(rng), ang(rng)), std::polar(mag(rng), ang(rng))};
      const Point v = original_velocity(sys, Chart::XY, xy);
      for (Chart c : {Chart::UZ, Chart::VW}) {
        const Point pc = *convert(Chart::XY, c, xy);
        const Point back = push_vector(c, Chart::XY, pc, original_velocity(sys, c, pc));
        worst = std::max(worst, norm2({back[0] - v[0], back[1] - v[1]}) / norm2(v));
      }
    }
  }
  return {worst < kChartRelTol, std::to_string(systems) + " systems, max relative mismatch " + g6(worst)};
}

Outcome golden() {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto rep = detour("linear_diag", {{"l1", -phi}, {"l2", -1.0}, {"m", 2}}, {0.5, 0.5}, 0.05, 100);
  double smallest = 1e300;
  int where = 0;
  for (std::size_t k = 0; k < rep.cycle_discrepancy.size(); ++k)
    if (rep.cycle_discrepancy[k] < smallest) smallest = rep.cycle_discrepancy[k], where = static_cast<int>(k + 1);
  const double first = rep.cycle_discrepancy.front();
  return {first > kGoldenFirstMin && smallest < kGoldenNearMax,
          "single cycle " + g6(first) + ", min " + g6(smallest) + " at k=" + std::to_string(where)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tree counts", trees},
      {"Riccati closed form", riccati},
      {"Riccati imaginary period", imaginary_period},
      {"linear holonomy", holonomy},
      {"winding law", winding_law},
      {"rational node closure", rational_closure},
      {"non-semisimple obstruction", jordan},
      {"pendulum windings", pendulum},
      {"energy conservation", energy},
      {"Galerkin spectra", galerkin},
      {"normal form residual order", normal_form},
      {"chart consistency", chart_consistency},
      {"irrational near-closure", golden},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
