#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specred/reduction.hpp"

namespace specred {

// A matrix together with the distinguished leading block S it was built to
// reduce onto, plus the trail of transforms that produced it.  The defining
// invariant -- reduce(matrix, subset) equals the source rational matrix -- is
// exercised by the test suite after every transform.
struct ProvenanceEntry {
  std::string op;
  std::string params;
};

template <class F>
struct Unfolding {
  LabeledMatrix<F> matrix;
  std::vector<std::string> subset;  // the first s labels
  std::vector<ProvenanceEntry> provenance;

  int s() const { return int(subset.size()); }
  int tail() const { return matrix.entries.rows - s(); }
};

namespace detail {

template <class F>
std::string scalar_brief(const F& v) {
  if constexpr (FieldTraits<F>::exact) {
    return to_string(v);
  } else {
    std::ostringstream os;
    os << v.real();
    if (v.imag() != 0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    return os.str();
  }
}

// Pivoted elimination rank factorization: K = X Y with X |rows| x r,
// Y r x |cols|.  Each step peels the largest remaining entry, so the float
// cutoff tau bounds what is treated as rank noise.
template <class F>
std::pair<Mat<F>, Mat<F>> rank_decompose(const Mat<F>& k, double tau) {
  Mat<F> r = k;
  std::vector<std::vector<F>> xcols, yrows;
  for (int step = 0; step < std::min(k.rows, k.cols); ++step) {
    int pi = -1, pj = -1;
    double best = 0;
    for (int i = 0; i < r.rows; ++i)
      for (int j = 0; j < r.cols; ++j) {
        double a = FieldTraits<F>::abs_approx(r(i, j));
        if (a > best) { best = a; pi = i; pj = j; }
      }
    bool live;
    if constexpr (FieldTraits<F>::exact)
      live = pi >= 0 && !FieldTraits<F>::is_zero(r(pi, pj));
    else
      live = pi >= 0 && best > tau;
    if (!live) break;
    F piv = r(pi, pj);
    std::vector<F> x(size_t(r.rows), FieldTraits<F>::zero());
    std::vector<F> y(size_t(r.cols), FieldTraits<F>::zero());
    for (int i = 0; i < r.rows; ++i) x[size_t(i)] = r(i, pj);
    for (int j = 0; j < r.cols; ++j) y[size_t(j)] = r(pi, j) / piv;
    for (int i = 0; i < r.rows; ++i)
      for (int j = 0; j < r.cols; ++j) r(i, j) = r(i, j) - x[size_t(i)] * y[size_t(j)];
    xcols.push_back(std::move(x));
    yrows.push_back(std::move(y));
  }
  int rnk = int(xcols.size());
  Mat<F> x(k.rows, rnk), y(rnk, k.cols);
  for (int c = 0; c < rnk; ++c) {
    for (int i = 0; i < k.rows; ++i) x(i, c) = xcols[size_t(c)][size_t(i)];
    for (int j = 0; j < k.cols; ++j) y(c, j) = yrows[size_t(c)][size_t(j)];
  }
  return {std::move(x), std::move(y)};
}

template <class F>
struct BasicBlocks {
  Mat<F> c, f, d;  // C (s x t), F (t x t), D (t x m)
};

// C (lI - F)^{-1} D = K / (l - nu)^n, by induction on n: for K = X Y unfold
// X/(l-nu)^{n-1} into (C', F', D') and wrap as
//   C = [0 | C'],  F = [[nu I, 0], [D', F']],  D = [Y; 0].
template <class F>
BasicBlocks<F> basic_blocks(const Mat<F>& k, const F& nu, int n, const Tolerances& tol) {
  double scale = 0;
  for (const F& v : k.a) scale = std::max(scale, FieldTraits<F>::abs_approx(v));
  auto [x, y] = rank_decompose(k, tol.rank * scale);
  const int s = k.rows, m = k.cols, r = x.cols;
  if (r == 0) return {Mat<F>(s, 0), Mat<F>(0, 0), Mat<F>(0, m)};
  if (n == 1) {
    Mat<F> f(r, r);
    for (int i = 0; i < r; ++i) f(i, i) = nu;
    return {std::move(x), std::move(f), std::move(y)};
  }
  BasicBlocks<F> inner = basic_blocks(x, nu, n - 1, tol);
  const int t = inner.f.rows;
  BasicBlocks<F> out{Mat<F>(s, r + t), Mat<F>(r + t, r + t), Mat<F>(r + t, m)};
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < t; ++j) out.c(i, r + j) = inner.c(i, j);
  for (int i = 0; i < r; ++i) out.f(i, i) = nu;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < r; ++j) out.f(r + i, j) = inner.d(i, j);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) out.f(r + i, r + j) = inner.f(i, j);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m; ++j) out.d(i, j) = y(i, j);
  return out;
}

inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> ls;
  ls.resize(size_t(n));
  for (int i = 0; i < n; ++i) ls[size_t(i)] = std::to_string(i);
  return ls;
}

// Smallest decimal label not already taken.
inline std::string fresh_label(const std::vector<std::string>& taken) {
  for (int c = 0;; ++c) {
    std::string cand = std::to_string(c);
    if (std::find(taken.begin(), taken.end(), cand) == taken.end()) return cand;
  }
}

template <class F>
Unfolding<F> unfolding_from_blocks(const Mat<F>& m, const Mat<F>& c, const Mat<F>& d,
                                   const Mat<F>& f, const Tolerances& tol) {
  const int s = m.rows, t = f.rows, n = s + t;
  Mat<F> a(n, n);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = m(i, j);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < t; ++j) a(i, s + j) = c(i, j);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < s; ++j) a(s + i, j) = d(i, j);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) a(s + i, s + j) = f(i, j);
  std::vector<std::string> labels = default_labels(n);
  Unfolding<F> u{make_labeled(labels, a, tol), {labels.begin(), labels.begin() + s}, {}};
  return u;
}

}  // namespace detail

// Unfolds R(lambda) = K / (lambda - nu)^n into a scalar matrix whose reduction
// to the leading block recovers it.  K = 0 collapses to the bare zero block.
template <class F>
Unfolding<F> unfold_basic(const Mat<F>& k, const F& nu, int n, const Tolerances& tol = {}) {
  if (k.rows != k.cols)
    throw Error(ErrorCode::DimensionMismatch, "unfold_basic needs a square coefficient");
  detail::BasicBlocks<F> b = detail::basic_blocks(k, nu, n, tol);
  Unfolding<F> u = detail::unfolding_from_blocks(Mat<F>(k.rows, k.rows), b.c, b.d, b.f, tol);
  u.provenance.push_back(
      {"unfold_basic", "nu=" + detail::scalar_brief(nu) + " n=" + std::to_string(n)});
  return u;
}

// Merges unfoldings sharing the block size: C blocks concatenate to the right,
// D blocks downwards, F blocks along the diagonal; the leading block becomes
// M plus the parts' leading blocks.  Reductions add.
template <class F>
Unfolding<F> assemble(const std::vector<Unfolding<F>>& parts, const Mat<F>& m,
                      const Tolerances& tol = {}) {
  if (m.rows != m.cols)
    throw Error(ErrorCode::DimensionMismatch, "assemble needs a square constant block");
  const int s = m.rows;
  int t = 0;
  for (const auto& p : parts) {
    if (p.s() != s)
      throw Error(ErrorCode::DimensionMismatch, "assemble parts disagree on block size");
    t += p.tail();
  }
  Mat<F> a(s + t, s + t);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = m(i, j);
  int off = s;
  for (const auto& p : parts) {
    const Mat<F>& pm = p.matrix.entries;
    const int pt = p.tail();
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) a(i, j) = a(i, j) + pm(i, j);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < pt; ++j) a(i, off + j) = pm(i, s + j);
    for (int i = 0; i < pt; ++i)
      for (int j = 0; j < s; ++j) a(off + i, j) = pm(s + i, j);
    for (int i = 0; i < pt; ++i)
      for (int j = 0; j < pt; ++j) a(off + i, off + j) = pm(s + i, s + j);
    off += pt;
  }
  std::vector<std::string> labels = detail::default_labels(s + t);
  Unfolding<F> u{make_labeled(labels, a, tol), {labels.begin(), labels.begin() + s}, {}};
  for (const auto& p : parts)
    u.provenance.insert(u.provenance.end(), p.provenance.begin(), p.provenance.end());
  u.provenance.push_back({"assemble", "parts=" + std::to_string(parts.size())});
  return u;
}

// General unfolding: partial fractions, one basic unfolding per pole power,
// constant part as the leading block.
template <class F>
Unfolding<F> unfold_general(const RatMatrix<F>& r, const Tolerances& tol = {}) {
  if (r.rows != r.cols)
    throw Error(ErrorCode::DimensionMismatch, "unfold_general needs a square matrix");
  for (const auto& e : r.a)
    if (!e.in_W()) throw Error(ErrorCode::NotProper, "entry has numerator degree above denominator");
  PartialFractionForm<F> pf = pfd_matrix(r, tol);
  std::vector<Unfolding<F>> parts;
  for (const auto& term : pf.terms)
    for (int k = 0; k < term.order; ++k) {
      const Mat<F>& coeff = term.coeffs[size_t(k)];
      bool zero = true;
      for (const F& v : coeff.a)
        if (!FieldTraits<F>::is_zero(v)) { zero = false; break; }
      if (!zero) parts.push_back(unfold_basic(coeff, term.pole, k + 1, tol));
    }
  Unfolding<F> u = assemble(parts, pf.constant, tol);
  u.provenance.push_back({"unfold_general", "terms=" + std::to_string(parts.size())});
  return u;
}

// --- Hermitian unfoldings ----------------------------------------------------

// Report on whether R admits a Hermitian unfolding: real simple poles,
// positive semidefinite residues, Hermitian limit at infinity.  The per-pole
// score is lambda_min of the Hermitian part minus the spectral norm of the
// skew part, so a non-Hermitian residue fails the PSD margin on its own.
struct HermitianFeasibility {
  bool poles_real = false;
  bool poles_simple = false;
  std::vector<std::pair<Cx, double>> residues_psd;  // (pole, PSD margin)
  bool limit_hermitian = false;
  bool feasible = false;
};

class NotHermitianFeasibleError : public Error {
 public:
  HermitianFeasibility report;
  explicit NotHermitianFeasibleError(HermitianFeasibility rep, const std::string& what)
      : Error(ErrorCode::NotHermitianFeasible, what), report(std::move(rep)) {}
};

template <class F>
HermitianFeasibility check_hermitian_feasibility(const RatMatrix<F>& r,
                                                 const Tolerances& tol = {}) {
  HermitianFeasibility rep;
  if (r.rows != r.cols) return rep;
  for (const auto& e : r.a)
    if (!e.in_W()) return rep;
  PartialFractionForm<F> pf;
  try {
    pf = pfd_matrix(r, tol);
  } catch (const Error&) {
    return rep;
  }
  rep.poles_real = true;
  rep.poles_simple = true;
  for (const auto& term : pf.terms) {
    if constexpr (FieldTraits<F>::exact) {
      if (!FieldTraits<F>::is_real(term.pole)) rep.poles_real = false;
    } else {
      if (std::abs(term.pole.imag()) > tol.pole) rep.poles_real = false;
    }
    if (term.order != 1) rep.poles_simple = false;
    Mat<Cx> k = mat_to_cx(term.coeffs[0]);
    Eigen::MatrixXcd ek = to_eigen(k);
    Eigen::MatrixXcd herm = (ek + ek.adjoint()) / 2.0, skew = (ek - ek.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    double margin = es.eigenvalues().minCoeff();
    if (skew.norm() > 0)
      margin -= Eigen::JacobiSVD<Eigen::MatrixXcd>(skew).singularValues()(0);
    rep.residues_psd.push_back({FieldTraits<F>::to_complex(term.pole), margin});
  }
  if constexpr (FieldTraits<F>::exact) {
    rep.limit_hermitian = pf.constant == mat_conj_transpose(pf.constant);
  } else {
    double scale = 1;
    for (const Cx& v : pf.constant.a) scale = std::max(scale, std::abs(v));
    rep.limit_hermitian = mat_is_hermitian(pf.constant, tol.eps * scale);
  }
  rep.feasible = rep.poles_real && rep.poles_simple && rep.limit_hermitian;
  for (const auto& [pole, margin] : rep.residues_psd)
    if (margin < -tol.psd) rep.feasible = false;
  return rep;
}

// Hermitian unfolding: per-pole factors K = X X* from the clamped
// eigendecomposition, tails [[0, X], [X*, nu I]].  Float backend only -- the
// square roots of the eigenvalues leave Q(i).
inline Unfolding<Cx> unfold_hermitian(const RatMatrix<Cx>& r, const Tolerances& tol = {}) {
  HermitianFeasibility rep = check_hermitian_feasibility(r, tol);
  if (!rep.feasible) {
    std::ostringstream os;
    os << "no Hermitian unfolding: poles_real=" << rep.poles_real
       << " poles_simple=" << rep.poles_simple << " limit_hermitian=" << rep.limit_hermitian;
    for (const auto& [pole, margin] : rep.residues_psd)
      if (margin < -tol.psd) os << " psd_margin(" << pole.real() << ")=" << margin;
    throw NotHermitianFeasibleError(rep, os.str());
  }
  PartialFractionForm<Cx> pf = pfd_matrix(r, tol);
  const int s = r.rows;
  Eigen::MatrixXcd em = to_eigen(pf.constant);
  Mat<Cx> m = from_eigen((em + em.adjoint()) / 2.0);
  std::vector<Unfolding<Cx>> parts;
  for (const auto& term : pf.terms) {
    Eigen::VectorXd vals;
    Eigen::MatrixXcd vecs;
    herm_eig(mat_to_cx(term.coeffs[0]), vals, vecs);
    std::vector<int> keep;
    for (int i = 0; i < vals.size(); ++i)
      if (vals(i) > tol.psd) keep.push_back(i);
    if (keep.empty()) continue;
    const int rnk = int(keep.size());
    Mat<Cx> x(s, rnk), xs(rnk, s), f(rnk, rnk);
    for (int c = 0; c < rnk; ++c) {
      double root = std::sqrt(std::max(vals(keep[size_t(c)]), 0.0));
      for (int i = 0; i < s; ++i) {
        x(i, c) = vecs(i, keep[size_t(c)]) * root;
        xs(c, i) = std::conj(x(i, c));
      }
      f(c, c) = Cx(term.pole.real(), 0);
    }
    Unfolding<Cx> part = detail::unfolding_from_blocks(Mat<Cx>(s, s), x, xs, f, tol);
    part.provenance.push_back(
        {"unfold_basic", "nu=" + detail::scalar_brief(Cx(term.pole.real(), 0)) + " n=1 hermitian"});
    parts.push_back(std::move(part));
  }
  Unfolding<Cx> u = assemble(parts, m, tol);
  u.provenance.push_back({"unfold_hermitian", "terms=" + std::to_string(parts.size())});
  return u;
}

// --- hollowing ---------------------------------------------------------------

namespace detail {

// Unitary Q with Q* f Q hollow, for Hermitian trace-zero f.  Each step mixes a
// positive and a negative eigenvector so the new leading diagonal entry is
// exactly zero (cos^2 t * l+ + sin^2 t * l- = 0 when tan^2 t = l+ / -l-),
// then recurses on the deflated trailing block.
inline Mat<Cx> hollowing_similarity(const Mat<Cx>& f0) {
  const int n = f0.rows;
  double scale = 1;
  for (const Cx& v : f0.a) scale = std::max(scale, std::abs(v));
  Mat<Cx> q = mat_identity<Cx>(n);
  Mat<Cx> g = f0;
  for (int k = 0; k + 1 <= n; ++k) {
    const int m = n - k;
    Eigen::VectorXd vals;
    Eigen::MatrixXcd vecs;
    herm_eig(g, vals, vecs);
    double lo = vals(0), hi = vals(m - 1);
    if (hi <= 1e-12 * scale && -lo <= 1e-12 * scale) break;  // block is ~0: hollow already
    if (!(hi > 0 && lo < 0)) break;  // cannot happen for trace-zero blocks
    double t2 = hi / (-lo);
    double c = 1 / std::sqrt(1 + t2), s = std::sqrt(t2 / (1 + t2));
    Mat<Cx> x0(m, 1);
    for (int i = 0; i < m; ++i) x0(i, 0) = c * vecs(i, m - 1) + s * vecs(i, 0);
    Mat<Cx> perp = unitary_completion(x0);
    Mat<Cx> qk(m, m);
    for (int i = 0; i < m; ++i) {
      qk(i, 0) = x0(i, 0);
      for (int j = 1; j < m; ++j) qk(i, j) = perp(i, j - 1);
    }
    // fold qk into the trailing block of q
    Mat<Cx> tail(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) tail(i, j) = q(i, k + j);
    tail = mat_mul(tail, qk);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) q(i, k + j) = tail(i, j);
    Mat<Cx> rot = mat_mul(mat_conj_transpose(qk), mat_mul(g, qk));
    Mat<Cx> next(m - 1, m - 1);
    for (int i = 1; i < m; ++i)
      for (int j = 1; j < m; ++j) next(i - 1, j - 1) = rot(i, j);
    g = std::move(next);
  }
  return q;
}

}  // namespace detail

// Hermitian unfolding -> hollow Hermitian unfolding of the same reduction:
// append a tail vertex carrying -tr(F) (skipped when the trace already
// vanishes), then apply blockdiag(I, Q) with Q the hollowing similarity.
inline Unfolding<Cx> hollow(const Unfolding<Cx>& u, bool hermitian = true,
                            const Tolerances& tol = {}) {
  const Mat<Cx>& a = u.matrix.entries;
  const int n = a.rows, s = u.s();
  double scale = 1;
  for (const Cx& v : a.a) scale = std::max(scale, std::abs(v));
  if (!hermitian || !mat_is_hermitian(a, tol.eps * scale))
    throw Error(ErrorCode::NotHermitian, "hollowing needs a Hermitian unfolding");
  for (int i = 0; i < s; ++i)
    if (std::abs(a(i, i)) > 1e-10)
      throw Error(ErrorCode::ConstantPartNotHollow,
                  "leading-block diagonal entry " + u.matrix.labels[size_t(i)] + " is not zero");
  const int m = n - s;
  Cx tr = 0;
  for (int i = 0; i < m; ++i) tr += a(s + i, s + i);
  const bool extend = std::abs(tr) > 1e-10;
  const int me = m + (extend ? 1 : 0);
  Mat<Cx> f(me, me), c(s, me);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) f(i, j) = a(s + i, s + j);
  if (extend) f(m, m) = -tr;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < m; ++j) c(i, j) = a(i, s + j);

  bool already = true;
  for (int i = 0; i < me; ++i)
    if (std::abs(f(i, i)) > 1e-10) { already = false; break; }
  if (!already) {
    Mat<Cx> q = detail::hollowing_similarity(f);
    f = mat_mul(mat_conj_transpose(q), mat_mul(f, q));
    c = mat_mul(c, q);
  }

  Mat<Cx> out(s + me, s + me);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) out(i, j) = a(i, j);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < me; ++j) {
      out(i, s + j) = c(i, j);
      out(s + j, i) = std::conj(c(i, j));
    }
  for (int i = 0; i < me; ++i)
    for (int j = 0; j < me; ++j) out(s + i, s + j) = (f(i, j) + std::conj(f(j, i))) / 2.0;
  std::vector<std::string> labels = u.matrix.labels;
  if (extend) labels.push_back(detail::fresh_label(labels));
  Unfolding<Cx> res{make_labeled(labels, out, tol), u.subset, u.provenance};
  res.provenance.push_back({"hollow", extend ? "appended=-tr(F)" : "appended=none"});
  return res;
}

// --- similarities on the tail ------------------------------------------------

// blockdiag(I, Q) A blockdiag(I, Q)^{-1}: leaves the reduction to S invariant.
template <class F>
Unfolding<F> conjugate_tail(const Unfolding<F>& u, const Mat<F>& q, const Tolerances& tol = {}) {
  const int s = u.s(), m = u.tail();
  if (q.rows != m || q.cols != m)
    throw Error(ErrorCode::DimensionMismatch, "tail similarity has the wrong size");
  if constexpr (!FieldTraits<F>::exact) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(to_eigen(q));
    lu.setThreshold(1e-12);
    if (lu.rank() < m)
      throw Error(ErrorCode::SingularQ, "tail similarity is numerically singular");
  }
  Mat<F> qi = mat_inverse(q, ErrorCode::SingularQ);
  const Mat<F>& a = u.matrix.entries;
  Mat<F> x = mat_identity<F>(s + m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) x(s + i, s + j) = q(i, j);
  Mat<F> xi = mat_identity<F>(s + m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) xi(s + i, s + j) = qi(i, j);
  Mat<F> out = mat_mul(x, mat_mul(a, xi));
  Unfolding<F> res{make_labeled(u.matrix.labels, out, tol), u.subset, u.provenance};
  res.provenance.push_back({"conjugate_tail", "size=" + std::to_string(m)});
  return res;
}

// Band compression sweep: rotate the untouched tail by the right singular
// vectors of the current coupling block, which concentrates that coupling
// into at most rank-many columns; those columns form the next band block.
// Result is block-tridiagonal with block size bounded by |S|.  A final pass
// of in-block 2x2 rotations antidiagonalizes every tail block whose trace
// vanishes, so a matrix whose band blocks all carry zero trace (the two-chain
// symmetric case) comes out entrywise hollow as well as banded.
inline Unfolding<Cx> compress_band(const Unfolding<Cx>& u, const Tolerances& tol = {}) {
  const int n = u.matrix.entries.rows, s = u.s();
  double scale = 1;
  for (const Cx& v : u.matrix.entries.a) scale = std::max(scale, std::abs(v));
  if (!mat_is_hermitian(u.matrix.entries, tol.eps * scale))
    throw Error(ErrorCode::NotHermitian, "band compression needs a Hermitian unfolding");
  Eigen::MatrixXcd ea = to_eigen(u.matrix.entries);
  std::vector<std::pair<int, int>> blocks;
  int prev0 = 0, prev1 = s, done = s;
  while (done < n) {
    const int p = prev1 - prev0, qn = n - done;
    Eigen::MatrixXcd cblk = ea.block(prev0, done, p, qn);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cblk, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (smax <= tol.rank * scale) break;  // remaining tail is decoupled
    Eigen::MatrixXcd v = svd.matrixV();
    ea.block(0, done, n, qn) = ea.block(0, done, n, qn) * v;
    ea.block(done, 0, qn, n) = v.adjoint() * ea.block(done, 0, qn, n);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol.rank * smax) ++rank;
    prev0 = done;
    prev1 = done + rank;
    done = prev1;
    blocks.push_back({prev0, prev1});
  }
  // Hollow-restoring rotations: diagonalize a traceless 2x2 diagonal block and
  // remix by the Hadamard matrix, leaving [[tr/2, e],[e, tr/2]].
  for (auto [b0, b1] : blocks) {
    if (b1 - b0 != 2) continue;
    Eigen::Matrix2cd b = ea.block(b0, b0, 2, 2);
    if (std::abs(b(0, 0) + b(1, 1)) > 1e-10 * std::max(1.0, scale)) continue;
    if (std::abs(b(0, 0)) + std::abs(b(1, 1)) <= 1e-14 * std::max(1.0, scale)) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(b);
    Eigen::Matrix2cd u2 = es.eigenvectors();
    for (int c = 0; c < 2; ++c) {  // phases pinned so real input stays real
      int big = std::abs(u2(0, c)) >= std::abs(u2(1, c)) ? 0 : 1;
      Cx ph = u2(big, c) / std::abs(u2(big, c));
      u2.col(c) *= std::conj(ph);
    }
    Eigen::Matrix2cd h2;
    h2 << 1, 1, 1, -1;
    Eigen::Matrix2cd w = u2 * (h2 / std::sqrt(2.0));
    ea.block(0, b0, n, 2) = ea.block(0, b0, n, 2) * w;
    ea.block(b0, 0, 2, n) = w.adjoint() * ea.block(b0, 0, 2, n);
  }
  Unfolding<Cx> res{make_labeled(u.matrix.labels, from_eigen(ea), tol), u.subset, u.provenance};
  res.provenance.push_back({"compress_band", ""});
  return res;
}

// Diagonal +-1 conjugation (signs on S pinned to +1) greedily maximizing the
// number of nonnegative off-diagonal entries; a switching similarity, so the
// reduction is untouched.
template <class F>
Unfolding<F> sign_cleanup(const Unfolding<F>& u, const Tolerances& tol = {}) {
  const Mat<F>& a = u.matrix.entries;
  const int n = a.rows, s = u.s();
  double scale = 1;
  for (const F& v : a.a) scale = std::max(scale, FieldTraits<F>::abs_approx(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      F sym = a(i, j) - a(j, i);
      F im = a(i, j) - FieldTraits<F>::conj(a(i, j));
      bool bad;
      if constexpr (FieldTraits<F>::exact)
        bad = !FieldTraits<F>::is_zero(sym) || !FieldTraits<F>::is_zero(im);
      else
        bad = FieldTraits<F>::abs_approx(sym) > tol.eps * scale ||
              FieldTraits<F>::abs_approx(im) > tol.eps * scale;
      if (bad)
        throw Error(ErrorCode::NotRealSymmetric, "sign cleanup needs a real symmetric matrix");
    }

  auto real_part = [](const F& v) {
    if constexpr (FieldTraits<F>::exact)
      return to_double(v.re);
    else
      return v.real();
  };
  const double edge_cut = FieldTraits<F>::exact ? 0.0 : 1e-12 * scale;
  auto present = [&](int i, int j) { return FieldTraits<F>::abs_approx(a(i, j)) > edge_cut; };

  std::vector<int> sign(size_t(n), 0);
  for (int i = 0; i < s; ++i) sign[size_t(i)] = 1;
  // BFS from the pinned block so each vertex is signed against known neighbors
  std::vector<int> order;
  std::vector<int> queue;
  for (int i = 0; i < s; ++i) queue.push_back(i);
  std::vector<bool> seen(size_t(n), false);
  for (int i = 0; i < s; ++i) seen[size_t(i)] = true;
  for (size_t h = 0; h < queue.size(); ++h) {
    int v = queue[h];
    if (v >= s) order.push_back(v);
    for (int w = 0; w < n; ++w)
      if (!seen[size_t(w)] && present(v, w)) { seen[size_t(w)] = true; queue.push_back(w); }
  }
  for (int v = s; v < n; ++v)
    if (!seen[size_t(v)]) { seen[size_t(v)] = true; order.push_back(v); }

  auto gain = [&](int v) {
    // nonnegative-minus-negative count over signed neighbors if sign[v] = +1
    int g = 0;
    for (int w = 0; w < n; ++w)
      if (w != v && sign[size_t(w)] != 0 && present(v, w))
        g += (sign[size_t(w)] * real_part(a(v, w)) >= 0) ? 1 : -1;
    return g;
  };
  for (int v : order) sign[size_t(v)] = gain(v) >= 0 ? 1 : -1;
  for (bool moved = true; moved;) {
    moved = false;
    for (int v = s; v < n; ++v) {
      int g = sign[size_t(v)] * gain(v);
      if (g < 0) { sign[size_t(v)] = -sign[size_t(v)]; moved = true; }
    }
  }

  Mat<F> out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out(i, j) = a(i, j);
      if (sign[size_t(i)] * sign[size_t(j)] < 0) out(i, j) = -out(i, j);
    }
  Unfolding<F> res{make_labeled(u.matrix.labels, out, tol), u.subset, u.provenance};
  res.provenance.push_back({"sign_cleanup", ""});
  return res;
}

// Reduction of an unfolding back to its distinguished block.
template <class F>
RatMatrix<F> unfolding_reduction(const Unfolding<F>& u, const Tolerances& tol = {}) {
  return reduce(u.matrix, u.subset, tol);
}

}  // namespace specred
