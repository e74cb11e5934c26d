#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "specred/labeled.hpp"
#include "specred/ratmat.hpp"

namespace specred {

// --- subset reduction -------------------------------------------------------

// R(lambda, S, A) = M + C (lambda I - F)^{-1} D on a raw index set.
template <class F>
RatMatrix<F> reduce_indices(const Mat<F>& a, const std::vector<int>& s,
                            const Tolerances& tol = {}) {
  std::vector<int> f = complement_indices(a.rows, s);
  if (f.empty()) {
    RatMatrix<F> r(int(s.size()), int(s.size()));
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = 0; j < s.size(); ++j)
        r(int(i), int(j)) = rf_from_const(a(s[i], s[j]));
    return r;
  }
  Mat<F> m = mat_submatrix(a, s, s);
  Mat<F> c = mat_submatrix(a, s, f);
  Mat<F> d = mat_submatrix(a, f, s);
  Mat<F> fm = mat_submatrix(a, f, f);
  return rm_add(rm_from_scalar(m), resolvent_sandwich(c, fm, d, tol), tol);
}

template <class F>
RatMatrix<F> reduce(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                    const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  if (int(idx.size()) == a.entries.rows) return rm_from_scalar(a.entries);
  return reduce_indices(a.entries, idx, tol);
}

// --- generalized (frame) reduction ------------------------------------------

template <class F>
void require_frame(const Mat<F>& sigma, double eps) {
  Mat<F> g = mat_mul(mat_conj_transpose(sigma), sigma);
  if (mat_max_abs_diff(g, mat_identity<F>(g.rows)) > eps)
    throw Error(ErrorCode::FrameNotOrthonormal, "frame columns are not orthonormal");
}

// R(lambda, Sigma, A) = lambda I - (Sigma* (lambda I - A)^{-1} Sigma)^{-1}.
template <class F>
RatMatrix<F> reduce_frame(const LabeledMatrix<F>& a, const Mat<F>& sigma,
                          const Tolerances& tol = {}) {
  if (sigma.rows != a.entries.rows)
    throw Error(ErrorCode::DimensionMismatch, "frame row count must match the matrix");
  require_frame(sigma, tol.eps);
  if constexpr (FieldTraits<F>::exact) {
    RatMatrix<F> t = resolvent_sandwich(mat_conj_transpose(sigma), a.entries, sigma, tol);
    return rm_sub(rm_lambda_identity<F>(sigma.cols), rm_inverse(t, tol), tol);
  } else {
    // Sigma* (lI - A)^{-1} Sigma = [(lI - D*AD)^{-1}]_{SS} for any unitary
    // completion D = [Sigma | perp], so the frame reduction equals the subset
    // reduction of D*AD onto the leading block.  That keeps the float backend
    // on the resolvent instead of compounding error through function-field
    // elimination.  (The exact backend has no square roots for a completion.)
    const int n = sigma.rows, s = sigma.cols;
    Mat<F> perp = unitary_completion(sigma);
    Mat<F> delta(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < s; ++j) delta(i, j) = sigma(i, j);
      for (int j = s; j < n; ++j) delta(i, j) = perp(i, j - s);
    }
    Mat<F> b = mat_mul(mat_mul(mat_conj_transpose(delta), a.entries), delta);
    std::vector<int> lead(size_t(s), 0);
    for (int j = 0; j < s; ++j) lead[size_t(j)] = j;
    return reduce_indices(b, lead, tol);
  }
}

// Same formula with a coordinate frame; must agree with reduce().
template <class F>
RatMatrix<F> reduce_via_formula2(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                                 const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  Mat<F> sigma(a.entries.rows, int(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) sigma(idx[j], int(j)) = FieldTraits<F>::one();
  RatMatrix<F> t = resolvent_sandwich(mat_conj_transpose(sigma), a.entries, sigma, tol);
  return rm_sub(rm_lambda_identity<F>(int(idx.size())), rm_inverse(t, tol), tol);
}

// --- reductions of matrices over the function field -------------------------

// Same block formula, with (lambda I - F)^{-1} taken over the function field.
template <class F>
RatMatrix<F> reduce_rm(const RatMatrix<F>& a, const std::vector<int>& s,
                       const Tolerances& tol = {}) {
  std::vector<int> f = complement_indices(a.rows, s);
  RatMatrix<F> m = mat_submatrix(a, s, s);
  if (f.empty()) return m;
  RatMatrix<F> c = mat_submatrix(a, s, f);
  RatMatrix<F> d = mat_submatrix(a, f, s);
  RatMatrix<F> fm = mat_submatrix(a, f, f);
  RatMatrix<F> res = rm_inverse(rm_sub(rm_lambda_identity<F>(int(f.size())), fm, tol), tol);
  return rm_add(m, rm_mul(rm_mul(c, res, tol), d, tol), tol);
}

template <class F>
RatMatrix<F> reduce_frame_rm(const RatMatrix<F>& a, const Mat<F>& sigma,
                             const Tolerances& tol = {}) {
  require_frame(sigma, tol.eps);
  RatMatrix<F> sig = rm_from_scalar(sigma);
  RatMatrix<F> res = rm_inverse(rm_sub(rm_lambda_identity<F>(a.rows), a, tol), tol);
  RatMatrix<F> t = rm_mul(rm_mul(rm_conj_transpose(sig), res, tol), sig, tol);
  return rm_sub(rm_lambda_identity<F>(sigma.cols), rm_inverse(t, tol), tol);
}

// Exact matrices compare by normal form, float ones through the shared
// sampled-equality protocol.
template <class F>
bool rm_agree(const RatMatrix<F>& a, const RatMatrix<F>& b, const Tolerances& tol = {}) {
  if constexpr (FieldTraits<F>::exact)
    return a == b;
  else
    return rm_sampled_equal(a, b, tol).equal;
}

// --- theorem-level checks ---------------------------------------------------

// Nested subsets commute: R(S', R(S, A)) = R(S', A).
template <class F>
bool reduce_sequential_check(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                             const std::vector<std::string>& s2, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  for (const std::string& lab : s2)
    if (std::find(s.begin(), s.end(), lab) == s.end())
      throw Error(ErrorCode::SubsetViolation,
                  "label '" + lab + "' of the inner subset is not in the outer subset");
  RatMatrix<F> r1 = reduce(a, s, tol);
  std::vector<int> inner;
  for (const std::string& lab : s2)
    inner.push_back(int(std::find(s.begin(), s.end(), lab) - s.begin()));
  RatMatrix<F> left = reduce_rm(r1, inner, tol);
  RatMatrix<F> right = reduce(a, s2, tol);
  return rm_agree(left, right, tol);
}

template <class F>
struct CharPolyIdentity {
  RationalFunction<F> lhs;  // det(lambda I - R)
  RationalFunction<F> rhs;  // det(lambda I - A) / det(lambda I - F)
  bool equal = false;
};

template <class F>
CharPolyIdentity<F> char_poly_identity(const LabeledMatrix<F>& a,
                                       const std::vector<std::string>& s,
                                       const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  std::vector<int> f = complement_indices(a.entries.rows, idx);
  CharPolyIdentity<F> out;
  RatMatrix<F> r = reduce(a, s, tol);
  out.lhs = rm_det(rm_sub(rm_lambda_identity<F>(r.rows), r, tol), tol);
  Polynomial<F> pa = char_poly(a.entries, tol);
  Polynomial<F> pf = f.empty() ? Polynomial<F>::one() : char_poly(mat_submatrix(a.entries, f, f), tol);
  out.rhs = rf_normalize(pa, pf, tol);
  if constexpr (FieldTraits<F>::exact) {
    out.equal = (out.lhs == out.rhs);
  } else {
    RatMatrix<F> wl(1, 1), wr(1, 1);
    wl(0, 0) = out.lhs;
    wr(0, 0) = out.rhs;
    out.equal = rm_sampled_equal(wl, wr, tol).equal;
  }
  return out;
}

// Restriction of an eigenpair: R(lambda0) (Sigma* u) = lambda0 (Sigma* u).
template <class F>
bool eigvec_restriction_check(const LabeledMatrix<F>& a, const Selector<F>& sel,
                              const F& lambda0, const std::vector<F>& u,
                              const Tolerances& tol = {}) {
  const int n = a.entries.rows;
  if (int(u.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "eigenvector length differs from the matrix");
  Mat<F> uc(n, 1);
  for (int i = 0; i < n; ++i) uc(i, 0) = u[size_t(i)];
  Mat<F> au = mat_mul(a.entries, uc);
  double unorm = 0;
  for (int i = 0; i < n; ++i) unorm = std::max(unorm, FieldTraits<F>::abs_approx(uc(i, 0)));
  for (int i = 0; i < n; ++i) {
    F resid = au(i, 0) - lambda0 * uc(i, 0);
    bool bad = FieldTraits<F>::exact ? !FieldTraits<F>::is_zero(resid)
                                     : FieldTraits<F>::abs_approx(resid) > tol.eps * std::max(1.0, unorm);
    if (bad) throw Error(ErrorCode::NotAnEigenpair, "Au = lambda0 u fails");
  }
  RatMatrix<F> r;
  Mat<F> us;
  if (sel.is_frame()) {
    r = reduce_frame(a, sel.frame, tol);
    us = mat_mul(mat_conj_transpose(sel.frame), uc);
  } else {
    std::vector<int> idx = subset_indices(a, sel.subset);
    r = reduce(a, sel.subset, tol);
    us = mat_submatrix(uc, idx, std::vector<int>{0});
  }
  Mat<F> rv = mat_mul(rm_eval(r, lambda0), us);  // throws EvaluationAtPole at poles
  double vscale = std::max(1.0, unorm);
  for (int i = 0; i < us.rows; ++i) {
    vscale = std::max(vscale, FieldTraits<F>::abs_approx(rv(i, 0)));
    vscale = std::max(vscale, FieldTraits<F>::abs_approx(lambda0 * us(i, 0)));
  }
  for (int i = 0; i < us.rows; ++i) {
    F resid = rv(i, 0) - lambda0 * us(i, 0);
    bool bad = FieldTraits<F>::exact ? !FieldTraits<F>::is_zero(resid)
                                     : FieldTraits<F>::abs_approx(resid) > tol.eps * vscale;
    if (bad) return false;
  }
  return true;
}

// --- walk-generating series -------------------------------------------------

// coeffs[l] is w_l; returning series starts at w_0 = I, the non-returning one
// at w*_0 = 0.
template <class F>
struct WalkSeries {
  std::vector<std::string> subset;
  std::vector<Mat<F>> coeffs;
};

// w_l = (A^l)_{S,S}.
template <class F>
WalkSeries<F> walk_series_returning(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                                    int len, const Tolerances& tol = {}) {
  (void)tol;
  std::vector<int> idx = subset_indices(a, s);
  WalkSeries<F> out{s, {}};
  Mat<F> power = mat_identity<F>(a.entries.rows);
  for (int l = 0; l <= len; ++l) {
    if (l > 0) power = mat_mul(power, a.entries);
    out.coeffs.push_back(mat_submatrix(power, idx, idx));
  }
  return out;
}

// Explicit walk enumeration (any weights; products along the walk).
template <class F>
WalkSeries<F> walk_series_brute(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                                int len, const Tolerances& tol = {}) {
  (void)tol;
  std::vector<int> idx = subset_indices(a, s);
  const int n = a.entries.rows;
  double work = double(n) * std::pow(double(n), double(len));
  if (work > 1e9)
    throw Error(ErrorCode::BruteForceTooLarge, "walk enumeration would exceed the budget");
  WalkSeries<F> out{s, {}};
  for (int l = 0; l <= len; ++l)
    out.coeffs.push_back(Mat<F>(int(idx.size()), int(idx.size()), FieldTraits<F>::zero()));
  std::vector<int> pos_in_s(size_t(n), -1);
  for (size_t k = 0; k < idx.size(); ++k) pos_in_s[size_t(idx[k])] = int(k);
  // Depth-first over all walks of length <= len from each source in S.
  std::function<void(int, int, int, const F&)> dfs = [&](int src_pos, int v, int l, const F& w) {
    if (pos_in_s[size_t(v)] >= 0)
      out.coeffs[size_t(l)](src_pos, pos_in_s[size_t(v)]) =
          out.coeffs[size_t(l)](src_pos, pos_in_s[size_t(v)]) + w;
    if (l == len) return;
    for (int u = 0; u < n; ++u) {
      const F& e = a.entries(v, u);
      if (FieldTraits<F>::is_zero(e)) continue;
      dfs(src_pos, u, l + 1, w * e);
    }
  };
  for (size_t k = 0; k < idx.size(); ++k)
    dfs(int(k), idx[k], 0, FieldTraits<F>::one());
  return out;
}

// First-return series w*_l via the reduction's expansion at infinity
// (R(lambda) = sum_j c_j lambda^{-j}, w*_l = c_{l-1}).
template <class F>
WalkSeries<F> walk_series_nonreturning(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                                       int len, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  RatMatrix<F> r = reduce(a, s, tol);
  const int k = r.rows;
  WalkSeries<F> out{s, {}};
  for (int l = 0; l <= len; ++l) out.coeffs.push_back(Mat<F>(k, k, FieldTraits<F>::zero()));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::vector<F> ser = rf_series_at_infinity(r(i, j), std::max(0, len - 1), tol);
      for (int l = 1; l <= len; ++l) out.coeffs[size_t(l)](i, j) = ser[size_t(l - 1)];
    }
  return out;
}

// W_S(t) = (I - W*_S(t))^{-1} as formal power series, coefficient by
// coefficient.
template <class F>
bool walk_identity_check(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                         int len, const Tolerances& tol = {}) {
  WalkSeries<F> ret = walk_series_returning(a, s, len, tol);
  WalkSeries<F> star = walk_series_nonreturning(a, s, len, tol);
  const int k = int(subset_indices(a, s).size());
  std::vector<Mat<F>> v;
  v.push_back(mat_identity<F>(k));
  double scale = 1;
  for (const auto& m : ret.coeffs)
    for (const F& x : m.a) scale = std::max(scale, FieldTraits<F>::abs_approx(x));
  for (int l = 1; l <= len; ++l) {
    Mat<F> acc(k, k, FieldTraits<F>::zero());
    for (int j = 1; j <= l; ++j)
      acc = mat_add(acc, mat_mul(star.coeffs[size_t(j)], v[size_t(l - j)]));
    v.push_back(acc);
  }
  for (int l = 0; l <= len; ++l) {
    double dev = mat_max_abs_diff(v[size_t(l)], ret.coeffs[size_t(l)]);
    if constexpr (FieldTraits<F>::exact) {
      if (!(v[size_t(l)] == ret.coeffs[size_t(l)])) return false;
    } else {
      if (dev > tol.eps * scale * 100) return false;
    }
  }
  return true;
}

// --- vertex-level and structural checks -------------------------------------

template <class F>
bool cospectral_check(const LabeledMatrix<F>& a, const std::string& u, const std::string& v,
                      const Tolerances& tol = {}) {
  if (u == v)
    throw Error(ErrorCode::UnknownLabel, "cospectrality needs two distinct vertices");
  RatMatrix<F> ru = reduce(a, {u}, tol);
  RatMatrix<F> rv = reduce(a, {v}, tol);
  return rm_agree(ru, rv, tol);
}

template <class F>
struct ResidueReport {
  Mat<F> expected;  // C E_mu D
  Mat<F> actual;    // order-1 coefficient at the matched pole of the PFD
  bool equal = false;
  bool is_pole = true;  // false reports a canceled pole (NotAPole), not a failure
};

// Orthogonal spectral projection of a normal matrix onto the mu eigenspace.
template <class F>
Mat<F> eigenprojection(const Mat<F>& f, const F& mu, const Tolerances& tol = {}) {
  const int n = f.rows;
  if constexpr (FieldTraits<F>::exact) {
    // Lagrange form Prod_{nu != mu} (F - nu I)/(mu - nu) over the exact spectrum.
    std::vector<F> roots = poly_roots_exact(char_poly(f));
    std::vector<F> distinct;
    for (const F& r : roots) {
      bool seen = false;
      for (const F& d : distinct)
        if (d == r) { seen = true; break; }
      if (!seen) distinct.push_back(r);
    }
    bool found = false;
    for (const F& d : distinct)
      if (d == mu) { found = true; break; }
    if (!found) return Mat<F>(n, n, FieldTraits<F>::zero());
    Mat<F> e = mat_identity<F>(n);
    for (const F& nu : distinct) {
      if (nu == mu) continue;
      Mat<F> shifted = f;
      for (int i = 0; i < n; ++i) shifted(i, i) = shifted(i, i) - nu;
      e = mat_mul(e, shifted);
      F inv = FieldTraits<F>::one() / (mu - nu);
      e = mat_scale(inv, e);
    }
    return e;
  } else {
    // Schur vectors spanning the mu cluster; for a normal matrix the Schur
    // form is diagonal and the basis orthonormal.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(to_eigen(mat_to_cx(f)));
    Eigen::MatrixXcd u = schur.matrixU();
    Eigen::MatrixXcd t = schur.matrixT();
    Cx m = FieldTraits<F>::to_complex(mu);
    std::vector<int> sel;
    for (int i = 0; i < n; ++i)
      if (std::abs(t(i, i) - m) <= tol.delta) sel.push_back(i);
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    for (int k : sel) e += u.col(k) * u.col(k).adjoint();
    Mat<F> out(n, n);
    if constexpr (std::is_same_v<F, Cx>)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = e(i, j);
    return out;
  }
}

template <class F>
ResidueReport<F> residue_check(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                               const F& mu, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  std::vector<int> fc = complement_indices(a.entries.rows, idx);
  Mat<F> f = mat_submatrix(a.entries, fc, fc);
  Mat<F> ff1 = mat_mul(f, mat_conj_transpose(f));
  Mat<F> ff2 = mat_mul(mat_conj_transpose(f), f);
  double scale = 1;
  for (const F& x : f.a) scale = std::max(scale, FieldTraits<F>::abs_approx(x));
  if (mat_max_abs_diff(ff1, ff2) > (FieldTraits<F>::exact ? 0.0 : tol.eps * scale * scale * 10))
    throw Error(ErrorCode::NotNormalF, "the exterior block F is not normal");

  ResidueReport<F> out;
  Mat<F> c = mat_submatrix(a.entries, idx, fc);
  Mat<F> d = mat_submatrix(a.entries, fc, idx);
  out.expected = mat_mul(mat_mul(c, eigenprojection(f, mu, tol)), d);
  out.actual = Mat<F>(int(idx.size()), int(idx.size()), FieldTraits<F>::zero());
  PartialFractionForm<F> pf = pfd_matrix(reduce(a, s, tol), tol);
  out.is_pole = false;
  for (const auto& term : pf.terms) {
    bool match = FieldTraits<F>::exact
                     ? term.pole == mu
                     : FieldTraits<F>::abs_approx(term.pole - mu) <= tol.delta;
    if (match) {
      out.actual = term.coeffs[0];
      out.is_pole = true;
      break;
    }
  }
  double dev = mat_max_abs_diff(out.expected, out.actual);
  out.equal = FieldTraits<F>::exact ? dev == 0 : dev <= tol.pole * std::max(1.0, scale);
  return out;
}

// Additivity over an edge split: the reduction of the assembled block matrix
// is the sum of the per-part reductions.
template <class F>
struct SplitPart {
  Mat<F> m, c, d, f;
};

template <class F>
bool edge_split_check(const std::vector<SplitPart<F>>& parts, const Tolerances& tol = {}) {
  if (parts.empty()) throw Error(ErrorCode::DimensionMismatch, "no parts to assemble");
  const int s = parts[0].m.rows;
  int total = s;
  for (const auto& p : parts) {
    if (p.m.rows != s || p.m.cols != s || p.c.rows != s || p.d.cols != s ||
        p.c.cols != p.f.cols || p.d.rows != p.f.rows || p.f.rows != p.f.cols)
      throw Error(ErrorCode::DimensionMismatch, "split part blocks are inconsistent");
    total += p.f.rows;
  }
  Mat<F> asm_(total, total, FieldTraits<F>::zero());
  RatMatrix<F> sum(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) sum(i, j) = RationalFunction<F>{};
  int off = s;
  for (const auto& p : parts) {
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) asm_(i, j) = asm_(i, j) + p.m(i, j);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < p.f.cols; ++j) asm_(i, off + j) = p.c(i, j);
    for (int i = 0; i < p.f.rows; ++i)
      for (int j = 0; j < s; ++j) asm_(off + i, j) = p.d(i, j);
    for (int i = 0; i < p.f.rows; ++i)
      for (int j = 0; j < p.f.cols; ++j) asm_(off + i, off + j) = p.f(i, j);
    off += p.f.rows;
    RatMatrix<F> part = p.f.rows == 0
                            ? rm_from_scalar(p.m)
                            : rm_add(rm_from_scalar(p.m), resolvent_sandwich(p.c, p.f, p.d, tol), tol);
    sum = rm_add(sum, part, tol);
  }
  std::vector<int> sidx;
  for (int i = 0; i < s; ++i) sidx.push_back(i);
  RatMatrix<F> assembled = reduce_indices(asm_, sidx, tol);
  return rm_agree(assembled, sum, tol);
}

// reduce(X A X^{-1}, S) = reduce(A, S) for X = blockdiag(I_S, Q).
template <class F>
bool similarity_invariance_check(const LabeledMatrix<F>& a, const std::vector<std::string>& s,
                                 const Mat<F>& q, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  std::vector<int> fc = complement_indices(a.entries.rows, idx);
  if (q.rows != int(fc.size()) || q.cols != int(fc.size()))
    throw Error(ErrorCode::DimensionMismatch, "Q must act on the complement of S");
  if constexpr (!FieldTraits<F>::exact) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(to_eigen(mat_to_cx(q)));
    lu.setThreshold(1e-12);
    if (lu.rank() < q.rows) throw Error(ErrorCode::SingularQ, "Q is numerically singular");
  }
  Mat<F> qi;
  try {
    qi = mat_inverse(q, ErrorCode::SingularQ);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularQ) throw Error(ErrorCode::SingularQ, "Q is singular");
    throw;
  }
  const int n = a.entries.rows;
  Mat<F> x = mat_identity<F>(n), xi = mat_identity<F>(n);
  for (size_t i = 0; i < fc.size(); ++i)
    for (size_t j = 0; j < fc.size(); ++j) {
      x(fc[i], fc[j]) = q(int(i), int(j));
      xi(fc[i], fc[j]) = qi(int(i), int(j));
    }
  Mat<F> conj = mat_mul(mat_mul(x, a.entries), xi);
  RatMatrix<F> left = reduce_indices(conj, idx, tol);
  RatMatrix<F> right = reduce_indices(a.entries, idx, tol);
  return rm_agree(left, right, tol);
}

// R(lambda, Sigma1 Sigma2, A) = R(lambda, Sigma2, R(lambda, Sigma1, A)).
template <class F>
bool frame_sequential_check(const LabeledMatrix<F>& a, const Mat<F>& sigma1,
                            const Mat<F>& sigma2, const Tolerances& tol = {}) {
  require_frame(sigma1, tol.eps);
  require_frame(sigma2, tol.eps);
  RatMatrix<F> inner = reduce_frame(a, sigma1, tol);
  RatMatrix<F> left = reduce_frame_rm(inner, sigma2, tol);
  RatMatrix<F> right = reduce_frame(a, mat_mul(sigma1, sigma2), tol);
  return rm_agree(left, right, tol);
}

// det(lambda I - R(Sigma)) = det(lambda I - A) / det(lambda I - Delta* A Delta)
// for a unitary completion [Sigma Delta].
template <class F>
bool frame_det_check(const LabeledMatrix<F>& a, const Mat<F>& sigma, const Mat<F>& delta,
                     const Tolerances& tol = {}) {
  const int n = a.entries.rows;
  if (sigma.rows != n || delta.rows != n || sigma.cols + delta.cols != n)
    throw Error(ErrorCode::NotAUnitaryCompletion, "[Sigma Delta] is not square");
  Mat<F> u(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < sigma.cols; ++j) u(i, j) = sigma(i, j);
    for (int j = 0; j < delta.cols; ++j) u(i, sigma.cols + j) = delta(i, j);
  }
  Mat<F> g = mat_mul(mat_conj_transpose(u), u);
  if (mat_max_abs_diff(g, mat_identity<F>(n)) > tol.eps)
    throw Error(ErrorCode::NotAUnitaryCompletion, "[Sigma Delta] is not unitary");
  RatMatrix<F> r = reduce_frame(a, sigma, tol);
  RationalFunction<F> lhs = rm_det(rm_sub(rm_lambda_identity<F>(r.rows), r, tol), tol);
  Polynomial<F> pa = char_poly(a.entries, tol);
  Mat<F> comp = mat_mul(mat_mul(mat_conj_transpose(delta), a.entries), delta);
  Polynomial<F> pc = delta.cols == 0 ? Polynomial<F>::one() : char_poly(comp, tol);
  RationalFunction<F> rhs = rf_normalize(pa, pc, tol);
  if constexpr (FieldTraits<F>::exact) {
    return lhs == rhs;
  } else {
    RatMatrix<F> wl(1, 1), wr(1, 1);
    wl(0, 0) = lhs;
    wr(0, 0) = rhs;
    return rm_sampled_equal(wl, wr, tol).equal;
  }
}

// Independent cospectrality oracle: characteristic polynomials of the two
// vertex-deleted matrices agree.
template <class F>
bool cospectral_deletion_oracle(const LabeledMatrix<F>& a, const std::string& u,
                                const std::string& v, const Tolerances& tol = {}) {
  std::vector<int> iu = subset_indices(a, {u});
  std::vector<int> iv = subset_indices(a, {v});
  std::vector<int> du = complement_indices(a.entries.rows, iu);
  std::vector<int> dv = complement_indices(a.entries.rows, iv);
  Polynomial<F> pu = char_poly(mat_submatrix(a.entries, du, du), tol);
  Polynomial<F> pv = char_poly(mat_submatrix(a.entries, dv, dv), tol);
  if constexpr (FieldTraits<F>::exact) {
    return pu == pv;
  } else {
    double dev = 0;
    for (int k = 0; k <= std::max(pu.deg(), pv.deg()); ++k)
      dev = std::max(dev, FieldTraits<F>::abs_approx(pu.coeff(k) - pv.coeff(k)));
    return dev <= tol.eps * std::max(1.0, std::max(pu.max_abs(), pv.max_abs()));
  }
}

}  // namespace specred
