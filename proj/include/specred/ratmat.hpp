#pragma once

#include <random>
#include <utility>
#include <vector>

#include "specred/mat.hpp"
#include "specred/numeric.hpp"
#include "specred/ratfun.hpp"

namespace specred {

// Matrix over the field of rational functions, row-major like Mat.
template <class F>
using RatMatrix = Mat<RationalFunction<F>>;

template <class F>
RatMatrix<F> rm_from_scalar(const Mat<F>& m) {
  RatMatrix<F> r(m.rows, m.cols);
  for (size_t k = 0; k < m.a.size(); ++k) r.a[k] = rf_from_const(m.a[k]);
  return r;
}

template <class F>
RatMatrix<F> rm_identity(int n) {
  RatMatrix<F> r(n, n);
  for (int i = 0; i < n; ++i) r(i, i) = rf_from_const(FieldTraits<F>::one());
  return r;
}

// lambda * I as a rational matrix.
template <class F>
RatMatrix<F> rm_lambda_identity(int n) {
  RatMatrix<F> r(n, n);
  for (int i = 0; i < n; ++i)
    r(i, i) = RationalFunction<F>{Polynomial<F>::x(), Polynomial<F>::one()};
  return r;
}

template <class F>
RatMatrix<F> rm_add(const RatMatrix<F>& x, const RatMatrix<F>& y, const Tolerances& tol = {}) {
  require_same_shape(x, y);
  RatMatrix<F> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = rf_add(r.a[k], y.a[k], tol);
  return r;
}

template <class F>
RatMatrix<F> rm_sub(const RatMatrix<F>& x, const RatMatrix<F>& y, const Tolerances& tol = {}) {
  require_same_shape(x, y);
  RatMatrix<F> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = rf_sub(r.a[k], y.a[k], tol);
  return r;
}

template <class F>
RatMatrix<F> rm_mul(const RatMatrix<F>& x, const RatMatrix<F>& y, const Tolerances& tol = {}) {
  if (x.cols != y.rows)
    throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  RatMatrix<F> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.cols; ++j) {
      RationalFunction<F> acc;
      for (int k = 0; k < x.cols; ++k)
        acc = rf_add(acc, rf_mul(x(i, k), y(k, j), tol), tol);
      r(i, j) = acc;
    }
  return r;
}

template <class F>
RatMatrix<F> rm_scale(const RationalFunction<F>& s, const RatMatrix<F>& x,
                      const Tolerances& tol = {}) {
  RatMatrix<F> r = x;
  for (auto& v : r.a) v = rf_mul(s, v, tol);
  return r;
}

template <class F>
RationalFunction<F> rf_conj(const RationalFunction<F>& r) {
  Polynomial<F> n = r.num, d = r.den;
  for (F& v : n.c) v = FieldTraits<F>::conj(v);
  for (F& v : d.c) v = FieldTraits<F>::conj(v);
  return {n, d};
}

template <class F>
RatMatrix<F> rm_conj_transpose(const RatMatrix<F>& x) {
  RatMatrix<F> r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = rf_conj(x(i, j));
  return r;
}

template <class F>
Mat<F> rm_eval(const RatMatrix<F>& m, const F& x) {
  Mat<F> r(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      try {
        r(i, j) = rf_eval(m(i, j), x);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::EvaluationAtPole)
          throw Error(ErrorCode::EvaluationAtPole,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") has a pole at the evaluation point");
        throw;
      }
    }
  return r;
}

template <class F>
Mat<Cx> rm_eval_cx(const RatMatrix<F>& m, const Cx& x) {
  Mat<Cx> r(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      try {
        r(i, j) = rf_eval_cx(m(i, j), x);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::EvaluationAtPole)
          throw Error(ErrorCode::EvaluationAtPole,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") has a pole at the evaluation point");
        throw;
      }
    }
  return r;
}

namespace detail {
// Pivot score for elimination on the float backend; exact backend only needs
// zero/nonzero.
template <class F>
double rf_pivot_score(const RationalFunction<F>& r) {
  if (r.is_zero()) return 0;
  double dn = r.den.max_abs();
  return dn > 0 ? r.num.max_abs() / dn : 0;
}
}  // namespace detail

// Gauss–Jordan over the fraction field.  Returns the inverse; the determinant
// comes from the pivot product and is exposed separately below.
template <class F>
RatMatrix<F> rm_inverse(const RatMatrix<F>& m, const Tolerances& tol = {}) {
  if (m.rows != m.cols)
    throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const int n = m.rows;
  RatMatrix<F> w = m, inv = rm_identity<F>(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int i = col; i < n; ++i) {
      double s = detail::rf_pivot_score(w(i, col));
      if (s > best) { best = s; piv = i; }
    }
    if (piv < 0)
      throw Error(ErrorCode::SingularOverFunctionField, "matrix is singular over the function field");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    RationalFunction<F> p = w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) = rf_div(w(col, j), p, tol);
      inv(col, j) = rf_div(inv(col, j), p, tol);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || w(i, col).is_zero()) continue;
      RationalFunction<F> f = w(i, col);
      for (int j = 0; j < n; ++j) {
        w(i, j) = rf_sub(w(i, j), rf_mul(f, w(col, j), tol), tol);
        inv(i, j) = rf_sub(inv(i, j), rf_mul(f, inv(col, j), tol), tol);
      }
    }
  }
  return inv;
}

template <class F>
RationalFunction<F> rm_det(const RatMatrix<F>& m, const Tolerances& tol = {}) {
  if (m.rows != m.cols)
    throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const int n = m.rows;
  RatMatrix<F> w = m;
  RationalFunction<F> det = rf_from_const(FieldTraits<F>::one());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int i = col; i < n; ++i) {
      double s = detail::rf_pivot_score(w(i, col));
      if (s > best) { best = s; piv = i; }
    }
    if (piv < 0) return {};
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(w(piv, j), w(col, j));
      det = rf_neg(det);
    }
    RationalFunction<F> p = w(col, col);
    det = rf_mul(det, p, tol);
    for (int i = col + 1; i < n; ++i) {
      if (w(i, col).is_zero()) continue;
      RationalFunction<F> f = rf_div(w(i, col), p, tol);
      for (int j = col; j < n; ++j)
        w(i, j) = rf_sub(w(i, j), rf_mul(f, w(col, j), tol), tol);
    }
  }
  return det;
}

// (lambda I - f)^{-1} kept as adjugate-polynomial over determinant; the single
// shared denominator avoids repeated cancellation when the resolvent is
// sandwiched between scalar matrices.
template <class F>
struct Resolvent {
  Mat<Polynomial<F>> adj;
  Polynomial<F> det;
};

// Faddeev–LeVerrier: exact adjugate and characteristic polynomial of
// lambda I - f.
template <class F>
Resolvent<F> resolvent_exact(const Mat<F>& f) {
  static_assert(FieldTraits<F>::exact);
  const int n = f.rows;
  std::vector<Mat<F>> M(size_t(n) + 1);
  std::vector<F> cpoly(size_t(n) + 1);  // descending: lambda^n + c[1] lambda^{n-1} + ...
  M[0] = mat_identity<F>(n);
  cpoly[0] = FieldTraits<F>::one();
  for (int k = 1; k <= n; ++k) {
    Mat<F> FM = mat_mul(f, M[size_t(k - 1)]);
    F tr = FieldTraits<F>::zero();
    for (int i = 0; i < n; ++i) tr = tr + FM(i, i);
    cpoly[size_t(k)] = -(tr / FieldTraits<F>::from_int(k));
    M[size_t(k)] = FM;
    for (int i = 0; i < n; ++i) M[size_t(k)](i, i) = M[size_t(k)](i, i) + cpoly[size_t(k)];
  }
  Resolvent<F> r;
  r.adj = Mat<Polynomial<F>>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<F> coeffs(size_t(n), FieldTraits<F>::zero());  // ascending in lambda
      for (int k = 0; k < n; ++k) coeffs[size_t(n - 1 - k)] = M[size_t(k)](i, j);
      r.adj(i, j) = Polynomial<F>(std::move(coeffs));
    }
  std::vector<F> dc(size_t(n) + 1);
  for (int k = 0; k <= n; ++k) dc[size_t(n - k)] = cpoly[size_t(k)];
  r.det = Polynomial<F>(std::move(dc));
  return r;
}

// Float path: sample lambda on a circle enclosing the spectrum, read off det
// and adjugate per node, recover polynomial coefficients by inverse DFT.
inline Resolvent<Cx> resolvent_interp(const Mat<Cx>& f) {
  const int n = f.rows;
  if (n == 0) return {Mat<Polynomial<Cx>>(0, 0), Polynomial<Cx>::one()};
  Eigen::MatrixXcd ef = to_eigen(f);
  Cx center = ef.trace() / double(n);
  double radius = 1;
  for (int i = 0; i < n; ++i) {
    double g = std::abs(ef(i, i) - center);
    for (int j = 0; j < n; ++j)
      if (j != i) g += std::abs(ef(i, j));
    radius = std::max(radius, g + 1);
  }
  const int N = n + 1;
  std::vector<Eigen::MatrixXcd> adjv{size_t(N), Eigen::MatrixXcd()};
  std::vector<Cx> detv(size_t(N), Cx(0));
  const double twopi = 2 * 3.14159265358979323846;
  for (int j = 0; j < N; ++j) {
    Cx lam = center + radius * std::exp(Cx(0, twopi * j / N));
    Eigen::MatrixXcd A = lam * Eigen::MatrixXcd::Identity(n, n) - ef;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    detv[size_t(j)] = lu.determinant();
    adjv[size_t(j)] = detv[size_t(j)] * lu.inverse();
  }
  auto dft_coeff = [&](auto&& getval, int k) {
    Cx acc = 0;
    for (int j = 0; j < N; ++j)
      acc += getval(j) * std::exp(Cx(0, -twopi * j * k / N));
    return acc / (double(N) * std::pow(radius, k));
  };
  Resolvent<Cx> r;
  std::vector<Cx> dc(size_t(n) + 1);
  for (int k = 0; k <= n; ++k) dc[size_t(k)] = dft_coeff([&](int j) { return detv[size_t(j)]; }, k);
  r.det = poly_from_shifted(dc, center);  // coefficients are in (lambda - center)^k
  r.adj = Mat<Polynomial<Cx>>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<Cx> cc(size_t(n), Cx(0));
      for (int k = 0; k < n; ++k)
        cc[size_t(k)] = dft_coeff([&](int j) { return adjv[size_t(j)](a, b); }, k);
      r.adj(a, b) = poly_from_shifted(cc, center);
    }
  return r;
}

// Hermitian float path: with f = sum_k mu_k u_k u_k*, the adjugate is
// sum_k u_k u_k* prod_{i != k}(lambda - mu_i).  Builds both polynomials from
// accurate eigenpairs, which stays well conditioned where the circle
// interpolation loses the small coefficients of a wide-ranging determinant.
inline Resolvent<Cx> resolvent_herm(const Mat<Cx>& f) {
  const int n = f.rows;
  if (n == 0) return {Mat<Polynomial<Cx>>(0, 0), Polynomial<Cx>::one()};
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;
  herm_eig(f, vals, vecs);
  std::vector<Cx> roots(size_t(n), Cx(0));
  for (int k = 0; k < n; ++k) roots[size_t(k)] = Cx(vals(k), 0);
  Resolvent<Cx> r;
  r.det = poly_from_roots(Cx(1), roots);
  r.adj = Mat<Polynomial<Cx>>(n, n);
  for (int k = 0; k < n; ++k) {
    std::vector<Cx> rest;
    rest.reserve(size_t(n) - 1);
    for (int i = 0; i < n; ++i)
      if (i != k) rest.push_back(roots[size_t(i)]);
    Polynomial<Cx> pk = poly_from_roots(Cx(1), rest);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Cx w = vecs(i, k) * std::conj(vecs(j, k));
        if (w != Cx(0)) r.adj(i, j) = r.adj(i, j) + w * pk;
      }
  }
  return r;
}

template <class F>
Resolvent<F> resolvent_raw(const Mat<F>& f) {
  if (f.rows != f.cols)
    throw Error(ErrorCode::DimensionMismatch, "resolvent of a non-square matrix");
  if constexpr (FieldTraits<F>::exact) {
    return resolvent_exact(f);
  } else {
    double scale = 1;
    for (const auto& v : f.a) scale = std::max(scale, std::abs(v));
    if (mat_is_hermitian(f, 1e-12 * scale)) return resolvent_herm(f);
    return resolvent_interp(f);
  }
}

template <class F>
RatMatrix<F> resolvent(const Mat<F>& f, const Tolerances& tol = {}) {
  Resolvent<F> r = resolvent_raw(f);
  RatMatrix<F> out(f.rows, f.cols);
  for (int i = 0; i < f.rows; ++i)
    for (int j = 0; j < f.cols; ++j) out(i, j) = rf_normalize(r.adj(i, j), r.det, tol);
  return out;
}

// c * (lambda I - f)^{-1} * d with one cancellation per output entry.
template <class F>
RatMatrix<F> resolvent_sandwich(const Mat<F>& c, const Mat<F>& f, const Mat<F>& d,
                                const Tolerances& tol = {}) {
  Resolvent<F> r = resolvent_raw(f);
  Mat<Polynomial<F>> left(c.rows, f.cols);
  for (int i = 0; i < c.rows; ++i)
    for (int j = 0; j < f.cols; ++j) {
      Polynomial<F> acc;
      for (int k = 0; k < c.cols; ++k) acc = acc + c(i, k) * r.adj(k, j);
      left(i, j) = acc;
    }
  RatMatrix<F> out(c.rows, d.cols);
  for (int i = 0; i < c.rows; ++i)
    for (int j = 0; j < d.cols; ++j) {
      Polynomial<F> acc;
      for (int k = 0; k < f.rows; ++k) acc = acc + d(k, j) * left(i, k);
      out(i, j) = rf_normalize(acc, r.det, tol);
    }
  return out;
}

// Exact entries demoted to the float backend, coefficientwise.
template <class F>
RatMatrix<Cx> rm_to_cx(const RatMatrix<F>& x) {
  RatMatrix<Cx> r(x.rows, x.cols);
  for (size_t k = 0; k < x.a.size(); ++k) {
    const auto& e = x.a[k];
    std::vector<Cx> nc, dc;
    for (int i = 0; i <= e.num.deg(); ++i) nc.push_back(FieldTraits<F>::to_complex(e.num.coeff(i)));
    for (int i = 0; i <= e.den.deg(); ++i) dc.push_back(FieldTraits<F>::to_complex(e.den.coeff(i)));
    r.a[k] = RationalFunction<Cx>{Polynomial<Cx>(std::move(nc)), Polynomial<Cx>(std::move(dc))};
  }
  return r;
}

template <class F>
Polynomial<F> char_poly(const Mat<F>& m, const Tolerances& tol = {}) {
  (void)tol;
  if constexpr (FieldTraits<F>::exact) {
    return resolvent_exact(m).det;
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
    std::vector<Cx> roots(es.eigenvalues().data(), es.eigenvalues().data() + m.rows);
    return poly_from_roots(Cx(1), roots);
  }
}

// Matrix partial fractions with one pooled pole list:
//   R = constant + sum_i sum_{k=1..order_i} coeffs[i][k-1] / (lambda - pole_i)^k.
template <class F>
struct PartialFractionForm {
  struct Term {
    F pole;
    int order = 1;
    std::vector<Mat<F>> coeffs;
  };
  Mat<F> constant;
  std::vector<Term> terms;
};

template <class F>
PartialFractionForm<F> pfd_matrix(const RatMatrix<F>& m, const Tolerances& tol = {}) {
  PartialFractionForm<F> out;
  out.constant = Mat<F>(m.rows, m.cols, FieldTraits<F>::zero());
  // Per-entry scalar decompositions.
  Mat<ScalarPFD<F>> entry(m.rows, m.cols);
  std::vector<Cx> pool_pts;
  std::vector<F> pool_exact;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      entry(i, j) = pfd_scalar(m(i, j), tol);
      out.constant(i, j) = entry(i, j).constant;
      for (const auto& t : entry(i, j).terms) {
        if constexpr (FieldTraits<F>::exact) {
          bool seen = false;
          for (const F& p : pool_exact)
            if (p == t.pole) { seen = true; break; }
          if (!seen) pool_exact.push_back(t.pole);
        } else {
          pool_pts.push_back(FieldTraits<F>::to_complex(t.pole));
        }
      }
    }

  std::vector<F> poles;
  if constexpr (FieldTraits<F>::exact) {
    poles = pool_exact;
  } else {
    for (auto& [c, cnt] : cluster_points(pool_pts, tol.delta)) {
      (void)cnt;
      if constexpr (std::is_same_v<F, Cx>) poles.push_back(c);
    }
  }

  auto matches = [&](const F& a, const F& b) {
    if constexpr (FieldTraits<F>::exact)
      return a == b;
    else
      return FieldTraits<F>::abs_approx(a - b) <= tol.delta;
  };

  for (const F& nu : poles) {
    typename PartialFractionForm<F>::Term term;
    term.pole = nu;
    term.order = 0;
    for (size_t k = 0; k < m.a.size(); ++k)
      for (const auto& t : entry.a[k].terms)
        if (matches(t.pole, nu)) term.order = std::max(term.order, t.order);
    term.coeffs.assign(size_t(term.order), Mat<F>(m.rows, m.cols, FieldTraits<F>::zero()));
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j)
        for (const auto& t : entry(i, j).terms)
          if (matches(t.pole, nu))
            for (int k = 0; k < t.order; ++k)
              term.coeffs[size_t(k)](i, j) = t.coeffs[size_t(k)];
    // Keep the top-order coefficient matrix nonzero.
    auto mat_small = [&](const Mat<F>& k) {
      for (const F& v : k.a)
        if (FieldTraits<F>::abs_approx(v) > (FieldTraits<F>::exact ? 0.0 : tol.eps)) return false;
      return true;
    };
    while (term.order > 0 && mat_small(term.coeffs.back())) {
      term.coeffs.pop_back();
      --term.order;
    }
    if (term.order > 0) out.terms.push_back(std::move(term));
  }
  return out;
}

template <class F>
RatMatrix<F> pfd_to_rm(const PartialFractionForm<F>& p, const Tolerances& tol = {}) {
  RatMatrix<F> acc = rm_from_scalar(p.constant);
  for (const auto& t : p.terms) {
    Polynomial<F> lin(std::vector<F>{-t.pole, FieldTraits<F>::one()});
    Polynomial<F> pw = Polynomial<F>::one();
    for (int k = 1; k <= t.order; ++k) {
      pw = pw * lin;
      for (int i = 0; i < acc.rows; ++i)
        for (int j = 0; j < acc.cols; ++j)
          acc(i, j) = rf_add(acc(i, j),
                             rf_normalize(Polynomial<F>::constant(t.coeffs[size_t(k - 1)](i, j)), pw, tol),
                             tol);
    }
  }
  return acc;
}

// Sampled-equality protocol: fixed seed, real points in [-20, 20] staying
// delta away from every pole of either side, relative tolerance tol.eps.
struct SampledEquality {
  bool equal = true;
  double max_dev = 0;
  std::vector<double> points;
};

template <class F>
std::vector<Cx> rm_pole_estimates(const RatMatrix<F>& m) {
  std::vector<Cx> poles;
  for (const auto& e : m.a) {
    if (e.den.deg() < 1) continue;
    Polynomial<Cx> d(std::vector<Cx>(e.den.c.size()));
    for (size_t k = 0; k < e.den.c.size(); ++k) d.c[k] = FieldTraits<F>::to_complex(e.den.c[k]);
    for (const Cx& r : poly_roots(d)) poles.push_back(r);
  }
  return poles;
}

template <class FA, class FB>
std::vector<double> sampled_points_avoiding(const RatMatrix<FA>& a, const RatMatrix<FB>& b,
                                            const Tolerances& tol, unsigned seed = 12345,
                                            int count = 20) {
  std::vector<Cx> poles = rm_pole_estimates(a);
  for (const Cx& p : rm_pole_estimates(b)) poles.push_back(p);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  std::vector<double> pts;
  int guard = 0;
  while (int(pts.size()) < count && guard++ < 10000) {
    double x = dist(rng);
    bool ok = true;
    for (const Cx& p : poles)
      if (std::abs(Cx(x) - p) < tol.delta) { ok = false; break; }
    if (ok) pts.push_back(x);
  }
  return pts;
}

template <class FA, class FB>
SampledEquality rm_sampled_equal(const RatMatrix<FA>& a, const RatMatrix<FB>& b,
                                 const Tolerances& tol = {}, unsigned seed = 12345,
                                 int count = 20) {
  SampledEquality out;
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(ErrorCode::DimensionMismatch, "sampled comparison of different shapes");
  out.points = sampled_points_avoiding(a, b, tol, seed, count);
  for (double x : out.points) {
    Mat<Cx> va = rm_eval_cx(a, Cx(x));
    Mat<Cx> vb = rm_eval_cx(b, Cx(x));
    for (size_t k = 0; k < va.a.size(); ++k) {
      double denom = std::max({1.0, std::abs(va.a[k]), std::abs(vb.a[k])});
      double dev = std::abs(va.a[k] - vb.a[k]) / denom;
      out.max_dev = std::max(out.max_dev, dev);
      if (dev > tol.eps) out.equal = false;
    }
  }
  return out;
}

}  // namespace specred
