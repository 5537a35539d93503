#include "blowup/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace blowup {

namespace {

void accumulate(BivariatePolynomial::TermMap& m, int j, int k, cplx c) {
  m[{j, k}] += c;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

BivariatePolynomial::BivariatePolynomial(const TermMap& terms) { rebuild(terms); }

void BivariatePolynomial::rebuild(const TermMap& m) {
  terms_.clear();
  degree_ = 0;
  for (const auto& [e, c] : m) {
    if (std::abs(c) < kPruneTolerance) continue;
    terms_.push_back({e.first, e.second, c});
    degree_ = std::max(degree_, e.first + e.second);
  }
}

BivariatePolynomial BivariatePolynomial::constant(cplx c) { return monomial(0, 0, c); }

BivariatePolynomial BivariatePolynomial::monomial(int j, int k, cplx c) {
  TermMap m;
  m[{j, k}] = c;
  return BivariatePolynomial(m);
}

BivariatePolynomial BivariatePolynomial::univariate(const std::vector<cplx>& coeffs, bool in_y) {
  TermMap m;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int p = static_cast<int>(i);
    if (in_y)
      m[{0, p}] += coeffs[i];
    else
      m[{p, 0}] += coeffs[i];
  }
  return BivariatePolynomial(m);
}

int BivariatePolynomial::degree_x() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.j);
  return d;
}

int BivariatePolynomial::degree_y() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.k);
  return d;
}

cplx BivariatePolynomial::coefficient(int j, int k) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(j, k),
                             [](const Term& t, const std::pair<int, int>& e) {
                               return std::make_pair(t.j, t.k) < e;
                             });
  if (it != terms_.end() && it->j == j && it->k == k) return it->c;
  return 0.0;
}

double BivariatePolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

cplx BivariatePolynomial::operator()(cplx x, cplx y) const {
  if (terms_.empty()) return 0.0;
  constexpr int kStack = 48;
  const int dx = degree_x(), dy = degree_y();
  cplx xs_buf[kStack], ys_buf[kStack];
  std::vector<cplx> xs_heap, ys_heap;
  cplx* xs = xs_buf;
  cplx* ys = ys_buf;
  if (dx >= kStack) {
    xs_heap.resize(dx + 1);
    xs = xs_heap.data();
  }
  if (dy >= kStack) {
    ys_heap.resize(dy + 1);
    ys = ys_heap.data();
  }
  xs[0] = 1.0;
  for (int i = 1; i <= dx; ++i) xs[i] = xs[i - 1] * x;
  ys[0] = 1.0;
  for (int i = 1; i <= dy; ++i) ys[i] = ys[i - 1] * y;
  cplx s = 0.0;
  for (const auto& t : terms_) s += t.c * xs[t.j] * ys[t.k];
  return s;
}

BivariatePolynomial BivariatePolynomial::dx() const {
  TermMap m;
  for (const auto& t : terms_)
    if (t.j > 0) accumulate(m, t.j - 1, t.k, t.c * static_cast<double>(t.j));
  return BivariatePolynomial(m);
}

BivariatePolynomial BivariatePolynomial::dy() const {
  TermMap m;
  for (const auto& t : terms_)
    if (t.k > 0) accumulate(m, t.j, t.k - 1, t.c * static_cast<double>(t.k));
  return BivariatePolynomial(m);
}

BivariatePolynomial BivariatePolynomial::truncated(int max_degree) const {
  TermMap m;
  for (const auto& t : terms_)
    if (t.j + t.k <= max_degree) m[{t.j, t.k}] = t.c;
  return BivariatePolynomial(m);
}

BivariatePolynomial BivariatePolynomial::homogeneous_part(int n) const {
  TermMap m;
  for (const auto& t : terms_)
    if (t.j + t.k == n) m[{t.j, t.k}] = t.c;
  return BivariatePolynomial(m);
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& o) {
  TermMap m = to_map();
  for (const auto& t : o.terms_) accumulate(m, t.j, t.k, t.c);
  rebuild(m);
  return *this;
}

BivariatePolynomial& BivariatePolynomial::operator-=(const BivariatePolynomial& o) {
  TermMap m = to_map();
  for (const auto& t : o.terms_) accumulate(m, t.j, t.k, -t.c);
  rebuild(m);
  return *this;
}

BivariatePolynomial& BivariatePolynomial::operator*=(cplx s) {
  TermMap m;
  for (const auto& t : terms_) m[{t.j, t.k}] = t.c * s;
  rebuild(m);
  return *this;
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  return multiply_truncated(a, b, -1);
}

bool BivariatePolynomial::operator==(const BivariatePolynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto &p = terms_[i], &q = o.terms_[i];
    if (p.j != q.j || p.k != q.k || p.c != q.c) return false;
  }
  return true;
}

BivariatePolynomial::TermMap BivariatePolynomial::to_map() const {
  TermMap m;
  for (const auto& t : terms_) m[{t.j, t.k}] = t.c;
  return m;
}

BivariatePolynomial multiply_truncated(const BivariatePolynomial& a, const BivariatePolynomial& b,
                                       int max_degree) {
  BivariatePolynomial::TermMap m;
  for (const auto& p : a.terms())
    for (const auto& q : b.terms()) {
      const int j = p.j + q.j, k = p.k + q.k;
      if (max_degree >= 0 && j + k > max_degree) continue;
      m[{j, k}] += p.c * q.c;
    }
  return BivariatePolynomial(m);
}

BivariatePolynomial power(const BivariatePolynomial& p, int n, int max_degree) {
  BivariatePolynomial result = BivariatePolynomial::constant(1.0);
  BivariatePolynomial base = p;
  while (n > 0) {
    if (n & 1) result = multiply_truncated(result, base, max_degree);
    n >>= 1;
    if (n > 0) base = multiply_truncated(base, base, max_degree);
  }
  return result;
}

BivariatePolynomial compose(const BivariatePolynomial& p, const BivariatePolynomial& X,
                            const BivariatePolynomial& Y, int max_degree) {
  const int dx = p.degree_x(), dy = p.degree_y();
  std::vector<BivariatePolynomial> xp(dx + 1), yp(dy + 1);
  xp[0] = yp[0] = BivariatePolynomial::constant(1.0);
  for (int i = 1; i <= dx; ++i) xp[i] = multiply_truncated(xp[i - 1], X, max_degree);
  for (int i = 1; i <= dy; ++i) yp[i] = multiply_truncated(yp[i - 1], Y, max_degree);
  BivariatePolynomial::TermMap m;
  for (const auto& t : p.terms()) {
    const BivariatePolynomial prod = multiply_truncated(xp[t.j], yp[t.k], max_degree);
    for (const auto& q : prod.terms()) m[{q.j, q.k}] += t.c * q.c;
  }
  return BivariatePolynomial(m);
}

double max_coefficient_difference(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  return (a - b).max_abs_coefficient();
}

TrivariatePolynomial::TrivariatePolynomial(const TermMap& terms) {
  for (const auto& [e, c] : terms)
    if (std::abs(c) >= kPruneTolerance) terms_[e] = c;
}

cplx TrivariatePolynomial::coefficient(int a, int b, int c) const {
  auto it = terms_.find({a, b, c});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx TrivariatePolynomial::operator()(cplx xi, cplx eta, cplx zeta) const {
  cplx s = 0.0;
  for (const auto& [e, c] : terms_)
    s += c * ipow(xi, e[0]) * ipow(eta, e[1]) * ipow(zeta, e[2]);
  return s;
}

int TrivariatePolynomial::homogeneous_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    const int n = e[0] + e[1] + e[2];
    if (d < 0)
      d = n;
    else if (d != n)
      return -1;
  }
  return d < 0 ? 0 : d;
}

PlanarField make_field(BivariatePolynomial f, BivariatePolynomial g) {
  PlanarField F;
  F.degree_m = std::max({1, f.degree(), g.degree()});
  F.f = std::move(f);
  F.g = std::move(g);
  return F;
}

}  // namespace blowup
