#pragma once

#include <array>
#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace blowup {

using cplx = std::complex<double>;

// Coefficients below this magnitude are dropped after every arithmetic operation.
inline constexpr double kPruneTolerance = 1e-14;

struct Term {
  int j = 0;  // power of the first variable
  int k = 0;  // power of the second variable
  cplx c;
};

// Sparse polynomial sum c_jk x^j y^k with complex coefficients.
// Terms are kept sorted by (j, k); no stored coefficient is zero.
class BivariatePolynomial {
 public:
  using TermMap = std::map<std::pair<int, int>, cplx>;

  BivariatePolynomial() = default;
  explicit BivariatePolynomial(const TermMap& terms);

  static BivariatePolynomial constant(cplx c);
  static BivariatePolynomial monomial(int j, int k, cplx c = 1.0);
  static BivariatePolynomial x() { return monomial(1, 0); }
  static BivariatePolynomial y() { return monomial(0, 1); }
  // Univariate polynomial sum coeffs[i] x^i (or y^i when in_y is set).
  static BivariatePolynomial univariate(const std::vector<cplx>& coeffs, bool in_y = false);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Maximal total degree j + k over stored terms; 0 for the zero polynomial.
  int degree() const { return degree_; }
  int degree_x() const;
  int degree_y() const;
  cplx coefficient(int j, int k) const;
  double max_abs_coefficient() const;

  cplx operator()(cplx x, cplx y) const;

  BivariatePolynomial dx() const;
  BivariatePolynomial dy() const;

  // Terms of total degree <= max_degree.
  BivariatePolynomial truncated(int max_degree) const;
  // Terms of total degree exactly n.
  BivariatePolynomial homogeneous_part(int n) const;

  BivariatePolynomial& operator+=(const BivariatePolynomial& o);
  BivariatePolynomial& operator-=(const BivariatePolynomial& o);
  BivariatePolynomial& operator*=(cplx s);

  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) { return a += b; }
  friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) { return a -= b; }
  friend BivariatePolynomial operator*(BivariatePolynomial a, cplx s) { return a *= s; }
  friend BivariatePolynomial operator*(cplx s, BivariatePolynomial a) { return a *= s; }
  friend BivariatePolynomial operator-(BivariatePolynomial a) { return a *= -1.0; }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);

  bool operator==(const BivariatePolynomial& o) const;

  TermMap to_map() const;

 private:
  void rebuild(const TermMap& m);
  std::vector<Term> terms_;
  int degree_ = 0;
};

// Product truncated to total degree <= max_degree.
BivariatePolynomial multiply_truncated(const BivariatePolynomial& a, const BivariatePolynomial& b,
                                       int max_degree);
BivariatePolynomial power(const BivariatePolynomial& p, int n, int max_degree = -1);

// p(X(x,y), Y(x,y)); terms of degree > max_degree are discarded when max_degree >= 0.
BivariatePolynomial compose(const BivariatePolynomial& p, const BivariatePolynomial& X,
                            const BivariatePolynomial& Y, int max_degree = -1);

// Coefficientwise maximum of |a - b|.
double max_coefficient_difference(const BivariatePolynomial& a, const BivariatePolynomial& b);

// Three-variable polynomial, used for homogenized fields.
class TrivariatePolynomial {
 public:
  using Exponent = std::array<int, 3>;
  using TermMap = std::map<Exponent, cplx>;

  TrivariatePolynomial() = default;
  explicit TrivariatePolynomial(const TermMap& terms);

  const TermMap& terms() const { return terms_; }
  cplx coefficient(int a, int b, int c) const;
  cplx operator()(cplx xi, cplx eta, cplx zeta) const;
  // Returns -1 when the terms do not share a single total degree.
  int homogeneous_degree() const;

 private:
  TermMap terms_;
};

// Polynomial planar vector field F = f d/dx + g d/dy.
struct PlanarField {
  BivariatePolynomial f;
  BivariatePolynomial g;
  int degree_m = 1;  // joint maximal degree of (f, g), at least 1

  bool is_zero() const { return f.is_zero() && g.is_zero(); }
};

// Joint degree max(deg f, deg g), floored at 1.
PlanarField make_field(BivariatePolynomial f, BivariatePolynomial g);

}  // namespace blowup
