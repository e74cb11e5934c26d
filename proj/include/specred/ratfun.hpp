#pragma once

#include <utility>
#include <vector>

#include "specred/poly.hpp"
#include "specred/roots.hpp"

namespace specred {

// Rational function in canonical form: monic denominator, common factors
// cancelled (exact gcd, or root matching within delta on the float backend).
template <class F>
struct RationalFunction {
  Polynomial<F> num;
  Polynomial<F> den = Polynomial<F>::one();

  bool is_zero() const { return num.is_zero(); }
  // Membership in W: deg num <= deg den (reduced form assumed).
  bool in_W() const { return num.deg() <= den.deg(); }
};

template <class F>
RationalFunction<F> rf_normalize(Polynomial<F> num, Polynomial<F> den,
                                 const Tolerances& tol = {}) {
  if constexpr (!FieldTraits<F>::exact) {
    // Leading-coefficient dust from cancelling arithmetic sits at ~1e-16
    // relative; legitimate coefficients can span 12 decades (a degree-14
    // denominator with roots up to 15 has constant term ~1e12 and lead 1), so
    // the cut must stay far below 1e-12 relative.
    num.trim_below(3e-13 * num.max_abs());
    den.trim_below(3e-13 * den.max_abs());
  }
  if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "denominator is the zero polynomial");
  if (num.is_zero()) return {Polynomial<F>::zero(), Polynomial<F>::one()};

  if constexpr (FieldTraits<F>::exact) {
    auto g = poly_gcd_exact(num, den);
    if (g.deg() > 0) {
      num = poly_divmod(num, g).first;
      den = poly_divmod(den, g).first;
    }
    F l = den.lead();
    std::vector<F> nc = num.c, dc = den.c;
    for (F& v : nc) v = v / l;
    for (F& v : dc) v = v / l;
    return {Polynomial<F>(std::move(nc)), Polynomial<F>(std::move(dc))};
  } else {
    // Cancel matching roots, then rebuild both polynomials from what remains.
    if (den.deg() == 0) {
      F l = den.lead();
      std::vector<F> nc = num.c;
      for (F& v : nc) v = v / l;
      return {Polynomial<F>(std::move(nc)), Polynomial<F>::one()};
    }
    std::vector<Cx> nr, dr;
    if constexpr (std::is_same_v<F, Cx>) {
      nr = poly_roots(num);
      dr = poly_roots(den);
    }
    std::vector<bool> used(nr.size(), false);
    std::vector<Cx> dkeep;
    for (const Cx& d : dr) {
      int best = -1;
      double bestdist = tol.delta;
      for (size_t i = 0; i < nr.size(); ++i) {
        if (used[i]) continue;
        double dist = std::abs(nr[i] - d);
        if (dist <= bestdist) { bestdist = dist; best = int(i); }
      }
      if (best >= 0) used[size_t(best)] = true; else dkeep.push_back(d);
    }
    std::vector<Cx> nkeep;
    for (size_t i = 0; i < nr.size(); ++i)
      if (!used[i]) nkeep.push_back(nr[i]);
    if constexpr (std::is_same_v<F, Cx>) {
      if (dkeep.size() == dr.size()) {
        // Nothing cancelled: just scale to a monic denominator.
        F l = den.lead();
        std::vector<F> nc = num.c, dc = den.c;
        for (F& v : nc) v = v / l;
        for (F& v : dc) v = v / l;
        return {Polynomial<F>(std::move(nc)), Polynomial<F>(std::move(dc))};
      }
      Cx scale = num.lead() / den.lead();
      return {poly_from_roots(scale, nkeep), poly_from_roots(Cx(1), dkeep)};
    } else {
      return {num, den};  // unreachable; float backend is Cx
    }
  }
}

template <class F>
RationalFunction<F> rf_from_const(const F& v) {
  return {Polynomial<F>::constant(v), Polynomial<F>::one()};
}

template <class F>
RationalFunction<F> rf_add(const RationalFunction<F>& a, const RationalFunction<F>& b,
                           const Tolerances& tol = {}) {
  return rf_normalize(a.num * b.den + b.num * a.den, a.den * b.den, tol);
}
template <class F>
RationalFunction<F> rf_sub(const RationalFunction<F>& a, const RationalFunction<F>& b,
                           const Tolerances& tol = {}) {
  return rf_normalize(a.num * b.den - b.num * a.den, a.den * b.den, tol);
}
template <class F>
RationalFunction<F> rf_mul(const RationalFunction<F>& a, const RationalFunction<F>& b,
                           const Tolerances& tol = {}) {
  return rf_normalize(a.num * b.num, a.den * b.den, tol);
}
template <class F>
RationalFunction<F> rf_div(const RationalFunction<F>& a, const RationalFunction<F>& b,
                           const Tolerances& tol = {}) {
  if (b.is_zero())
    throw Error(ErrorCode::DivisionByZeroFunction, "division by the zero rational function");
  return rf_normalize(a.num * b.den, a.den * b.num, tol);
}
template <class F>
RationalFunction<F> rf_neg(const RationalFunction<F>& a) {
  return {-a.num, a.den};
}

template <class F>
RationalFunction<F> operator+(const RationalFunction<F>& a, const RationalFunction<F>& b) { return rf_add(a, b); }
template <class F>
RationalFunction<F> operator-(const RationalFunction<F>& a, const RationalFunction<F>& b) { return rf_sub(a, b); }
template <class F>
RationalFunction<F> operator*(const RationalFunction<F>& a, const RationalFunction<F>& b) { return rf_mul(a, b); }
template <class F>
RationalFunction<F> operator/(const RationalFunction<F>& a, const RationalFunction<F>& b) { return rf_div(a, b); }
template <class F>
RationalFunction<F> operator-(const RationalFunction<F>& a) { return rf_neg(a); }
template <class F>
bool operator==(const RationalFunction<F>& a, const RationalFunction<F>& b) {
  return a.num == b.num && a.den == b.den;
}

template <class F>
F rf_eval(const RationalFunction<F>& r, const F& x) {
  F d = r.den.eval(x);
  if constexpr (FieldTraits<F>::exact) {
    if (FieldTraits<F>::is_zero(d))
      throw Error(ErrorCode::EvaluationAtPole, "evaluation point is a pole");
  } else {
    double scale = r.den.max_abs() * std::max(1.0, std::pow(FieldTraits<F>::abs_approx(x), std::max(0, r.den.deg())));
    if (FieldTraits<F>::abs_approx(d) <= 1e-12 * std::max(1.0, scale))
      throw Error(ErrorCode::EvaluationAtPole, "evaluation point is numerically a pole");
  }
  return r.num.eval(x) / d;
}

template <class F>
Cx rf_eval_cx(const RationalFunction<F>& r, const Cx& x) {
  Cx d = r.den.eval_cx(x);
  if (std::abs(d) < 1e-300)
    throw Error(ErrorCode::EvaluationAtPole, "evaluation point is a pole");
  return r.num.eval_cx(x) / d;
}

template <class F>
RationalFunction<F> rf_derivative(const RationalFunction<F>& r, const Tolerances& tol = {}) {
  return rf_normalize(r.num.derivative() * r.den - r.num * r.den.derivative(),
                      r.den * r.den, tol);
}

// Coefficients c_0..c_len of the expansion r(lambda) = sum_j c_j lambda^{-j},
// valid when deg num <= deg den.  Power-series division of the reversals.
template <class F>
std::vector<F> rf_series_at_infinity(const RationalFunction<F>& r, int len,
                                     const Tolerances& tol = {}) {
  (void)tol;
  if (!r.in_W())
    throw Error(ErrorCode::NotProper, "series at infinity needs deg num <= deg den");
  std::vector<F> out(size_t(len) + 1, FieldTraits<F>::zero());
  if (r.is_zero()) return out;
  int dn = r.num.deg(), dd = r.den.deg(), shift = dd - dn;
  std::vector<F> a(size_t(len) + 1, FieldTraits<F>::zero());
  std::vector<F> b(size_t(len) + 1, FieldTraits<F>::zero());
  for (int k = 0; k <= dn && k <= len; ++k) a[size_t(k)] = r.num.c[size_t(dn - k)];
  for (int k = 0; k <= dd && k <= len; ++k) b[size_t(k)] = r.den.c[size_t(dd - k)];
  std::vector<F> u(size_t(len) + 1, FieldTraits<F>::zero());
  for (int k = 0; k <= len; ++k) {
    F acc = a[size_t(k)];
    for (int j = 1; j <= k; ++j) acc = acc - b[size_t(j)] * u[size_t(k - j)];
    u[size_t(k)] = acc / b[0];
  }
  for (int j = shift; j <= len; ++j) out[size_t(j)] = u[size_t(j - shift)];
  return out;
}

// Partial fraction decomposition of a scalar in W:
//   r = constant + sum_i sum_{k=1..m_i} coeffs[i][k-1] / (lambda - pole_i)^k.
template <class F>
struct ScalarPFD {
  struct Term {
    F pole;
    int order = 1;
    std::vector<F> coeffs;  // ascending k = 1..order
  };
  F constant = FieldTraits<F>::zero();
  std::vector<Term> terms;
};

template <class F>
ScalarPFD<F> pfd_scalar(const RationalFunction<F>& r, const Tolerances& tol = {}) {
  if (r.num.deg() > r.den.deg())
    throw Error(ErrorCode::NotProper, "partial fractions need deg num <= deg den");
  ScalarPFD<F> out;
  if (r.num.deg() == r.den.deg() && !r.is_zero())
    out.constant = r.num.lead() / r.den.lead();
  if (r.den.deg() == 0) return out;

  // Pole list with multiplicities.
  std::vector<std::pair<F, int>> poles;
  if constexpr (FieldTraits<F>::exact) {
    auto roots = poly_roots_exact(r.den);
    for (const F& x : roots) {
      bool merged = false;
      for (auto& [p, m] : poles)
        if (p == x) { ++m; merged = true; break; }
      if (!merged) poles.push_back({x, 1});
    }
  } else {
    for (auto& [p, m] : cluster_points(poly_roots(r.den), tol.delta))
      poles.push_back({p, m});
  }

  for (size_t i = 0; i < poles.size(); ++i) {
    const F& nu = poles[i].first;
    int m = poles[i].second;
    // Deflated denominator q with the (lambda - nu)^m factor removed.
    Polynomial<F> q = Polynomial<F>::constant(r.den.lead());
    for (size_t j = 0; j < poles.size(); ++j) {
      if (j == i) continue;
      for (int k = 0; k < poles[j].second; ++k)
        q = q * Polynomial<F>(std::vector<F>{-poles[j].first, FieldTraits<F>::one()});
    }
    // K_{m-j} = g^(j)(nu)/j! where g = num/q.
    typename ScalarPFD<F>::Term term;
    term.pole = nu;
    term.order = m;
    term.coeffs.assign(size_t(m), FieldTraits<F>::zero());
    RationalFunction<F> g{r.num, q};
    F fact = FieldTraits<F>::one();
    for (int j = 0; j < m; ++j) {
      if (j > 0) {
        g = {g.num.derivative() * g.den - g.num * g.den.derivative(), g.den * g.den};
        fact = fact * FieldTraits<F>::from_int(j);
      }
      term.coeffs[size_t(m - 1 - j)] = g.num.eval(nu) / g.den.eval(nu) / fact;
    }
    out.terms.push_back(std::move(term));
  }
  // Drop terms that are zero: exactly, or negligible next to the largest residue.
  // (The shared num/den scale is arbitrary, so thresholds must come from the
  // residues themselves.)
  if constexpr (FieldTraits<F>::exact) {
    std::erase_if(out.terms, [](const auto& t) {
      for (const F& k : t.coeffs)
        if (!FieldTraits<F>::is_zero(k)) return false;
      return true;
    });
  } else {
    double gmax = 0;
    for (const auto& t : out.terms)
      for (const F& k : t.coeffs) gmax = std::max(gmax, FieldTraits<F>::abs_approx(k));
    const double cut = tol.eps * std::max(1.0, gmax);
    std::erase_if(out.terms, [&](const auto& t) {
      for (const F& k : t.coeffs)
        if (FieldTraits<F>::abs_approx(k) > cut) return false;
      return true;
    });
  }
  return out;
}

template <class F>
RationalFunction<F> pfd_to_rf(const ScalarPFD<F>& p, const Tolerances& tol = {}) {
  RationalFunction<F> acc = rf_from_const(p.constant);
  for (const auto& t : p.terms) {
    Polynomial<F> lin(std::vector<F>{-t.pole, FieldTraits<F>::one()});
    Polynomial<F> pw = Polynomial<F>::one();
    for (int k = 1; k <= t.order; ++k) {
      pw = pw * lin;
      acc = rf_add(acc, rf_normalize(Polynomial<F>::constant(t.coeffs[size_t(k - 1)]), pw, tol), tol);
    }
  }
  return acc;
}

}  // namespace specred
