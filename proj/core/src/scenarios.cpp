#include "blowup/scenarios.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

using P = BivariatePolynomial;
constexpr cplx kI{0.0, 1.0};

P mono(int j, int k, cplx c = 1.0) { return P::monomial(j, k, c); }

struct Spec {
  CatalogInfo info;
  std::function<void(CatalogEntry&)> build;
};

int as_int(const ParameterMap& p, const std::string& key, int lo) {
  const double v = p.at(key);
  if (v != std::round(v) || v < lo)
    throw ValidationError("ExcludedParameter", key + " must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

void set_pendulum(CatalogEntry& e, const std::vector<cplx>& G) {
  e.hamiltonian = pendulum_hamiltonian(G, 0.0);
  e.field = hamiltonian_field(*e.hamiltonian);
}

const std::vector<Spec>& registry() {
  static const std::vector<Spec> specs = {
      {{"riccati", "Riccati flow x' = a (x - e1)(x - e2) embedded with y' = -y", {{"a", 1}, {"e1", 1}, {"e2", -1}}, {}},
       [](CatalogEntry& e) {
         const double a = e.params["a"], e1 = e.params["e1"], e2 = e.params["e2"];
         if (a == 0.0) throw ValidationError("ExcludedParameter", "a must be nonzero");
         e.field = make_field(P::univariate({a * e1 * e2, -a * (e1 + e2), a}), mono(0, 1, -1.0));
         e.expected["e1"] = e1;
         e.expected["e2"] = e2;
         // f'(e) = a (2e - e1 - e2): negative at the sink.
         const bool e2_sink = a * (e2 - e1) < 0;
         e.expected["sink"] = e2_sink ? e2 : e1;
         e.expected["source"] = e2_sink ? e1 : e2;
       }},
      {{"scalar_poly", "scalar blow-up x' = c x^m embedded with y' = -y", {{"m", 2}, {"c", 1}}, {}},
       [](CatalogEntry& e) {
         const int m = as_int(e.params, "m", 1);
         const double c = e.params["c"];
         if (c == 0.0) throw ValidationError("ExcludedParameter", "c must be nonzero");
         e.field = make_field(mono(m, 0, c), mono(0, 1, -1.0));
         e.expected["lambda1"] = -c;
         e.expected["lambda2"] = m == 1 ? cplx{-1.0 - c} : cplx{-c};
         e.expected["w_t"] = m - 1;
         e.expected["w_u"] = 1;
       }},
      {{"cyclotomic", "cyclotomic scalar flow x' = x^m - 1 embedded with y' = -y", {{"m", 3}}, {}},
       [](CatalogEntry& e) {
         const int m = as_int(e.params, "m", 1);
         e.field = make_field(mono(m, 0) - P::constant(1.0), mono(0, 1, -1.0));
         for (int k = 0; k < m; ++k)
           e.expected["root" + std::to_string(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
       }},
      {{"linear_diag",
        "diagonal node or saddle: eigenvalues l1, l2 at the blow-up equilibrium u = z = 0, optional quadratic "
        "perturbation eps",
        {{"m", 1}, {"eps", 0}},
        {"l1", "l2"}},
       [](CatalogEntry& e) {
         const int m = as_int(e.params, "m", 1);
         const double l1 = e.params["l1"], l2 = e.params["l2"], eps = e.params["eps"];
         if (eps != 0.0 && m < 2) throw ValidationError("ExcludedParameter", "eps requires m >= 2");
         // Chart field (l1 u - eps u z, l2 z + eps z^2).
         P f = mono(m, 0, -l1), g = mono(m - 1, 1, l2 - l1);
         if (eps != 0.0) {
           f += mono(m - 1, 1, eps);
           g += mono(m - 2, 2, 2.0 * eps);
         }
         e.field = make_field(f, g);
         e.field.degree_m = m;
         e.expected["lambda1"] = l1;
         e.expected["lambda2"] = l2;
         if (l2 != 0.0) {
           e.expected["quotient"] = l1 / l2;
           e.expected["multiplier"] = std::exp(2.0 * std::numbers::pi * kI * (l1 / l2));
         }
       }},
      {{"jordan_block", "non-semisimple node u' = -u, z' = u - z at infinity", {{"m", 2}}, {}},
       [](CatalogEntry& e) {
         const int m = as_int(e.params, "m", 1);
         e.field = make_field(mono(m, 0), mono(m - 1, 0));
         e.field.degree_m = m;
         e.expected["lambda1"] = -1.0;
         e.expected["lambda2"] = -1.0;
         e.expected["semisimple"] = 0.0;
       }},
      {{"reciprocal_linear",
        "reciprocally linear flow: linear field (-n1 x, -n2 y) with Euler multiplier (x - a y)(x - b y)",
        {{"a", 1}, {"b", -1}, {"n1", 1}, {"n2", 2}},
        {}},
       [](CatalogEntry& e) {
         const double a = e.params["a"], b = e.params["b"];
         const int n1 = as_int(e.params, "n1", 1), n2 = as_int(e.params, "n2", 1);
         if (a == b) throw ValidationError("ExcludedParameter", "a and b must differ");
         e.field = make_field(mono(1, 0, -static_cast<double>(n1)), mono(0, 1, -static_cast<double>(n2)));
         e.euler_multiplier = multiply_truncated(mono(1, 0) - mono(0, 1, a), mono(1, 0) - mono(0, 1, b), 2);
         e.expected["closure_revolutions"] = 2 * n2;
       }},
      {{"reciprocal_diag", "x' = 1/x, y' = 1/y: field (y, x) with Euler multiplier x y", {}, {}},
       [](CatalogEntry& e) {
         e.field = make_field(mono(0, 1), mono(1, 0));
         e.euler_multiplier = mono(1, 1);
         e.expected["w_t"] = 2;
         e.expected["w_x"] = 1;
         e.expected["w_y"] = 1;
       }},
      {{"homogeneous", "2-homogeneous field f = x^2 + y^2, g = 2 x y", {}, {}},
       [](CatalogEntry& e) {
         e.field = make_field(mono(2, 0) + mono(0, 2), mono(1, 1, 2.0));
         // P(z) = z - z^3, f1(z) = 1 + z^2; multiplier exp(2 pi i (-f1(e) / P'(e))).
         for (double r : {0.0, 1.0, -1.0}) {
           const std::string key = r == 0.0 ? "0" : (r > 0 ? "+1" : "-1");
           e.expected["root" + key] = r;
           e.expected["multiplier" + key] = std::exp(2.0 * std::numbers::pi * kI * (-(1.0 + r * r) / (1.0 - 3.0 * r * r)));
         }
       }},
      {{"weierstrass", "Weierstrass pendulum g = 6 (x^2 - 1), G = 2 x^3 - 6 x", {}, {}},
       [](CatalogEntry& e) {
         set_pendulum(e, {0.0, -6.0, 0.0, 2.0});
         e.expected["w_t"] = 1;
         e.expected["w_v"] = 3;
         e.expected["w_w"] = 1;
         e.expected["leaves"] = 1;
       }},
      {{"duffing", "Duffing pendulum g = -x + x^3", {}, {}},
       [](CatalogEntry& e) {
         set_pendulum(e, {0.0, 0.0, -0.5, 0.0, 0.25});
         e.expected["w_t"] = 1;
         e.expected["w_v"] = 2;
         e.expected["w_w"] = 1;
         e.expected["leaves"] = 2;
       }},
      {{"linear_pendulum", "linear pendulum g = x, H = y^2/2 - x^2/2", {}, {}},
       [](CatalogEntry& e) {
         set_pendulum(e, {0.0, 0.0, 0.5});
         e.expected["period"] = 2.0 * std::numbers::pi * kI;
       }},
      {{"galerkin_symmetric", "symmetric Galerkin caricature f = x^2 + a y^2 / 4, g = y (-1 + a x)", {{"a", 2}}, {}},
       [](CatalogEntry& e) {
         const double a = e.params["a"];
         e.field = make_field(mono(2, 0) + mono(0, 2, 0.25 * a), mono(0, 1, -1.0) + mono(1, 1, a));
         for (const auto& r : galerkin_spectrum(GalerkinVariant::Symmetric, e.params)) {
           const std::string key = r.location[1] == 0.0 ? "origin" : (r.location[1].real() > 0 || r.location[1].imag() > 0 ? "e_plus" : "e_minus");
           e.expected[key] = r.location[1];
           e.expected[key + ".lambda1"] = r.eigenvalues[0];
           e.expected[key + ".lambda2"] = r.eigenvalues[1];
           e.expected[key + ".quotient"] = r.spectral_quotient;
         }
       }},
      {{"galerkin_asymmetric",
        "asymmetric Galerkin caricature f = x (x + b1 y), g = -y + b1 x^2 + (3 b1 + b3) y^2 / 4, beta = b3 / b1",
        {{"b1", 1}, {"beta", 3}},
        {}},
       [](CatalogEntry& e) {
         const double b1 = e.params["b1"], b3 = e.params["beta"] * b1;
         e.field = make_field(mono(2, 0) + mono(1, 1, b1),
                              mono(0, 1, -1.0) + mono(2, 0, b1) + mono(0, 2, 0.25 * (3.0 * b1 + b3)));
         const auto recs = galerkin_spectrum(GalerkinVariant::Asymmetric, e.params);
         e.expected["d"] = 1.0 + b1 * b1 * (1.0 - e.params["beta"]);
         const char* keys[] = {"origin", "e_plus", "e_minus"};
         for (std::size_t i = 0; i < recs.size(); ++i) {
           const std::string key = keys[i];
           e.expected[key] = recs[i].location[1];
           e.expected[key + ".lambda1"] = recs[i].eigenvalues[0];
           e.expected[key + ".lambda2"] = recs[i].eigenvalues[1];
           e.expected[key + ".quotient"] = recs[i].spectral_quotient;
         }
       }},
  };
  return specs;
}

EquilibriumRecord expected_record(Chart chart, cplx e, cplx l1, cplx l2, bool semisimple) {
  EquilibriumRecord r;
  r.chart = chart;
  r.location = {0.0, e};
  r.eigenvalues = {l1, l2};
  r.spectral_quotient = l1 / l2;
  r.semisimple = semisimple;
  const cplx q = r.spectral_quotient;
  r.domain = (std::abs(q.imag()) < 1e-14 && q.real() <= 0.0) ? Domain::Siegel : Domain::Poincare;
  r.classified = true;
  return r;
}

}  // namespace

ChartSystem CatalogEntry::charts() const {
  return euler_multiplier ? to_charts(field, *euler_multiplier) : to_charts(field);
}

std::vector<CatalogInfo> catalog_list() {
  std::vector<CatalogInfo> out;
  for (const auto& s : registry()) out.push_back(s.info);
  return out;
}

CatalogEntry catalog_get(const std::string& name, const ParameterMap& params) {
  for (const auto& s : registry()) {
    if (s.info.name != name) continue;
    CatalogEntry e;
    e.name = name;
    e.description = s.info.description;
    e.params = s.info.defaults;
    for (const auto& [k, v] : params) {
      const bool known = s.info.defaults.count(k) ||
                         std::find(s.info.required.begin(), s.info.required.end(), k) != s.info.required.end();
      if (!known) throw ValidationError("UnknownParameter", "catalog entry '" + name + "' has no parameter '" + k + "'");
      if (!std::isfinite(v)) throw ValidationError("ExcludedParameter", "parameter '" + k + "' must be finite");
      e.params[k] = v;
    }
    for (const auto& r : s.info.required)
      if (!e.params.count(r)) throw ValidationError("MissingParameter", "catalog entry '" + name + "' needs '" + r + "'");
    s.build(e);
    return e;
  }
  throw ValidationError("UnknownName", "no catalog entry named '" + name + "'");
}

std::int64_t tree_count(int m) {
  if (m < 2 || m > 30) throw ValidationError("OutOfRange", "tree_count needs 2 <= m <= 30");
  // The chord-diagram formula overcounts the single tree on two vertices.
  if (m == 2) return 1;
  __extension__ typedef __int128 I;
  auto binom = [](int n, int k) {
    I r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  auto phi = [](int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      while (n % p == 0) n /= p;
      r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
  };
  const int n = m - 1;
  // Multiply through by L = 4 n m so every term is an integer.
  const I L = static_cast<I>(4) * n * m;
  I total = 2 * binom(2 * n, n);
  if (m % 2 == 0) total += static_cast<I>(m) * binom(m, m / 2);
  total += static_cast<I>(4) * m * phi(n);
  for (int k = 2; k <= n - 1; ++k)
    if (n % k == 0) total += static_cast<I>(2) * m * binom(2 * k, k) * phi(n / k);
  if (total % L != 0) throw NumericalError("NonIntegralCount", "tree count formula did not cancel");
  return static_cast<std::int64_t>(total / L);
}

std::vector<EquilibriumRecord> galerkin_spectrum(GalerkinVariant variant, const ParameterMap& params) {
  auto get = [&](const std::string& k, double def) {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };
  std::vector<EquilibriumRecord> out;
  if (variant == GalerkinVariant::Symmetric) {
    const double a = get("a", 2.0);
    if (a == 0.0 || a == 1.0) throw ValidationError("ExcludedParameter", "symmetric caricature needs a not in {0, 1}");
    out.push_back(expected_record(Chart::UZ, 0.0, -1.0, a - 1.0, true));
    const cplx e = 2.0 * std::sqrt(cplx{1.0 - 1.0 / a});
    // lambda_1 = lambda_2 exactly at a = 2, where the Jacobian carries the off-diagonal -e.
    const bool ss = a != 2.0;
    out.push_back(expected_record(Chart::UZ, e, -a, 2.0 * (1.0 - a), ss));
    out.push_back(expected_record(Chart::UZ, -e, -a, 2.0 * (1.0 - a), ss));
    return out;
  }
  const double b1 = get("b1", 1.0), beta = get("beta", 3.0);
  if (!(b1 > 0.0)) throw ValidationError("ExcludedParameter", "asymmetric caricature needs b1 > 0");
  if (beta == -3.0 || beta == 1.0 || beta == 1.0 + 1.0 / (b1 * b1))
    throw ValidationError("ExcludedParameter", "asymmetric caricature needs beta not in {-3, 1, 1 + 1/b1^2}");
  out.push_back(expected_record(Chart::VW, 0.0, -0.25 * b1 * (beta + 3.0), -0.25 * b1 * (beta - 1.0), true));
  const double d = 1.0 + b1 * b1 * (1.0 - beta);
  for (double sgn : {1.0, -1.0}) {
    const cplx e = 0.5 * (1.0 + sgn * std::sqrt(cplx{d})) / b1;
    out.push_back(expected_record(Chart::VW, e, -e - b1, -e - b1 * (1.0 - beta) / 2.0, true));
  }
  return out;
}

}  // namespace blowup
