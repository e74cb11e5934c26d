#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "specred/error.hpp"
#include "specred/scalar.hpp"

namespace specred {

// Dense univariate polynomial, ascending coefficients.  Zero polynomial is the
// empty coefficient list (degree -1 stands in for the -infinity sentinel).
template <class F>
struct Polynomial {
  std::vector<F> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<F> coeffs) : c(std::move(coeffs)) { trim(); }

  static Polynomial zero() { return {}; }
  static Polynomial constant(const F& v) { return Polynomial(std::vector<F>{v}); }
  static Polynomial one() { return constant(FieldTraits<F>::one()); }
  static Polynomial x() { return Polynomial(std::vector<F>{FieldTraits<F>::zero(), FieldTraits<F>::one()}); }

  int deg() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  F coeff(int k) const {
    return (k >= 0 && k < int(c.size())) ? c[k] : FieldTraits<F>::zero();
  }
  F lead() const { return c.empty() ? FieldTraits<F>::zero() : c.back(); }

  void trim() {
    while (!c.empty() && FieldTraits<F>::is_zero(c.back())) c.pop_back();
  }
  // Float cleanup: drop trailing coefficients below floor_abs (absolute).
  void trim_below(double floor_abs) {
    while (!c.empty() && FieldTraits<F>::abs_approx(c.back()) <= floor_abs) c.pop_back();
  }
  double max_abs() const {
    double m = 0;
    for (const F& v : c) m = std::max(m, FieldTraits<F>::abs_approx(v));
    return m;
  }

  F eval(const F& x) const {
    F acc = FieldTraits<F>::zero();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  Cx eval_cx(const Cx& x) const {
    Cx acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + FieldTraits<F>::to_complex(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c.size() <= 1) return zero();
    std::vector<F> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * FieldTraits<F>::from_int(long(k));
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    std::vector<F> d = c;
    F l = lead();
    for (F& v : d) v = v / l;
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<F> r(std::max(a.c.size(), b.c.size()), FieldTraits<F>::zero());
    for (size_t k = 0; k < a.c.size(); ++k) r[k] = r[k] + a.c[k];
    for (size_t k = 0; k < b.c.size(); ++k) r[k] = r[k] + b.c[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<F> r(std::max(a.c.size(), b.c.size()), FieldTraits<F>::zero());
    for (size_t k = 0; k < a.c.size(); ++k) r[k] = r[k] + a.c[k];
    for (size_t k = 0; k < b.c.size(); ++k) r[k] = r[k] - b.c[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<F> r = a.c;
    for (F& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    std::vector<F> r(a.c.size() + b.c.size() - 1, FieldTraits<F>::zero());
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const F& s, const Polynomial& a) {
    std::vector<F> r = a.c;
    for (F& v : r) v = s * v;
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c == b.c; }
};

// Euclidean division over the coefficient field: a = q*b + r, deg r < deg b.
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> poly_divmod(const Polynomial<F>& a, const Polynomial<F>& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "polynomial division by zero");
  std::vector<F> rem = a.c;
  int db = b.deg();
  if (a.deg() < db) return {Polynomial<F>::zero(), a};
  std::vector<F> q(a.deg() - db + 1, FieldTraits<F>::zero());
  F bl = b.lead();
  for (int k = a.deg(); k >= db; --k) {
    F f = rem[k] / bl;
    if (!FieldTraits<F>::is_zero(f)) {
      q[k - db] = f;
      for (int j = 0; j <= db; ++j) rem[k - db + j] = rem[k - db + j] - f * b.c[j];
    }
    rem[k] = FieldTraits<F>::zero();
  }
  return {Polynomial<F>(std::move(q)), Polynomial<F>(std::move(rem))};
}

// Exact gcd (Euclid, monic remainders).  Only meaningful on the exact backend.
template <class F>
Polynomial<F> poly_gcd_exact(Polynomial<F> a, Polynomial<F> b) {
  static_assert(FieldTraits<F>::exact, "exact gcd requires the exact backend");
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    (void)q;
    a = std::move(b);
    b = r.monic();
  }
  return a.is_zero() ? a : a.monic();
}

template <class F>
Polynomial<F> poly_from_roots(const F& lead, const std::vector<F>& roots) {
  Polynomial<F> p = Polynomial<F>::constant(lead);
  for (const F& r : roots)
    p = p * Polynomial<F>(std::vector<F>{-r, FieldTraits<F>::one()});
  return p;
}

// Rebuild p(x) from coefficients a_k of the shifted basis (x - c)^k.
template <class F>
Polynomial<F> poly_from_shifted(const std::vector<F>& a, const F& c) {
  Polynomial<F> base(std::vector<F>{-c, FieldTraits<F>::one()});
  Polynomial<F> p = Polynomial<F>::zero();
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    p = p * base + Polynomial<F>::constant(*it);
  return p;
}

}  // namespace specred
