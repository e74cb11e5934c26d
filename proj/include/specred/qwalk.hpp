#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specred/reduction.hpp"

namespace specred {

// --- continuous-time walks ---------------------------------------------------

// Restriction of the walk U(t) = e^{-itA} to a vertex subset, sampled in time.
struct WalkSample {
  std::vector<std::string> subset;
  std::vector<double> times;
  std::vector<Mat<Cx>> blocks;  // (e^{-itA})_{S,S} per time
};

struct PSTCertificate {
  std::string u, v;
  double tau = 0;
  Cx gamma;          // unit phase with U(tau) e_u ~ gamma e_v
  double deviation = 0;  // |U(tau) e_u - gamma e_v|
};

struct PSTOutcome {
  bool certified = false;
  PSTCertificate cert;
  double mass = 0;  // |U(tau)_{v,u}|^2
};

struct FRResult {
  bool ok = false;
  Mat<Cx> h;                // U(tau)_{S,S} when ok
  std::string worst_label;  // column with the largest leak
  double leaked = 0;        // its off-block mass
};

namespace detail {

// One eigendecomposition per matrix; every time sample reuses it.
struct HermEvolver {
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;

  static HermEvolver build(const LabeledMatrix<Cx>& a, const Tolerances& tol) {
    double scale = 1;
    for (const Cx& v : a.entries.a) scale = std::max(scale, std::abs(v));
    if (!mat_is_hermitian(a.entries, tol.eps * scale))
      throw Error(ErrorCode::NotHermitian, "walk generator must be Hermitian");
    HermEvolver e;
    herm_eig(a.entries, e.vals, e.vecs);
    return e;
  }

  Eigen::MatrixXcd at(double t) const {
    Eigen::VectorXcd phases(vals.size());
    for (int k = 0; k < vals.size(); ++k) phases(k) = std::exp(Cx(0, -t * vals(k)));
    return vecs * phases.asDiagonal() * vecs.adjoint();
  }
};

}  // namespace detail

inline Mat<Cx> evolve(const LabeledMatrix<Cx>& a, double t, const Tolerances& tol = {}) {
  return from_eigen(detail::HermEvolver::build(a, tol).at(t));
}

inline WalkSample restricted_walk(const LabeledMatrix<Cx>& a, const std::vector<std::string>& s,
                                  const std::vector<double>& times, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  detail::HermEvolver ev = detail::HermEvolver::build(a, tol);
  WalkSample w{s, times, {}};
  for (double t : times) {
    Eigen::MatrixXcd u = ev.at(t);
    Mat<Cx> blk(int(idx.size()), int(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) blk(int(i), int(j)) = u(idx[i], idx[j]);
    w.blocks.push_back(std::move(blk));
  }
  return w;
}

// Perfect state transfer u -> v at time tau: the walk column of u must put
// mass >= 1 - tol^2 on v; gamma is then the phase of the (v,u) entry.
inline PSTOutcome pst_check(const LabeledMatrix<Cx>& a, const std::string& u,
                            const std::string& v, double tau, const Tolerances& tol = {}) {
  if (u == v) throw Error(ErrorCode::UnknownLabel, "state transfer needs two distinct vertices");
  int iu = subset_indices(a, {u})[0];
  int iv = subset_indices(a, {v})[0];
  detail::HermEvolver ev = detail::HermEvolver::build(a, tol);
  Eigen::MatrixXcd ut = ev.at(tau);
  PSTOutcome out;
  out.mass = std::norm(ut(iv, iu));
  Cx gamma = std::abs(ut(iv, iu)) > 0 ? ut(iv, iu) / std::abs(ut(iv, iu)) : Cx(1);
  Eigen::VectorXcd col = ut.col(iu);
  col(iv) -= gamma;
  out.cert = {u, v, tau, gamma, col.norm()};
  // mass >= 1 - tol^2 restated as deviation <= tol: same criterion by column
  // unitarity, but 1 - tol^2 sits below what the mass can resolve in floats.
  out.certified = out.cert.deviation <= tol.pst;
  return out;
}

// Grid scan for |U(t)_{v,u}| maxima on [0, T], each refined by golden-section
// search to 1e-10 in t.  All refined candidates are returned; `certified`
// marks the ones that clear the transfer tolerance.
inline std::vector<PSTOutcome> pst_scan(const LabeledMatrix<Cx>& a, const std::string& u,
                                        const std::string& v, double T, int grid,
                                        const Tolerances& tol = {}) {
  if (u == v) throw Error(ErrorCode::UnknownLabel, "state transfer needs two distinct vertices");
  grid = std::max(grid, 2);
  int iu = subset_indices(a, {u})[0];
  int iv = subset_indices(a, {v})[0];
  detail::HermEvolver ev = detail::HermEvolver::build(a, tol);
  auto f = [&](double t) { return std::abs(ev.at(t)(iv, iu)); };
  std::vector<double> ts, fs;
  for (int i = 0; i <= grid; ++i) {
    double t = T * i / grid;
    ts.push_back(t);
    fs.push_back(f(t));
  }
  const double gr = (std::sqrt(5.0) - 1) / 2;
  std::vector<PSTOutcome> out;
  for (int i = 1; i + 1 <= grid; ++i) {
    if (!(fs[size_t(i)] >= fs[size_t(i - 1)] && fs[size_t(i)] >= fs[size_t(i + 1)])) continue;
    double lo = ts[size_t(i - 1)], hi = ts[size_t(i + 1)];
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-10) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = f(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = f(x1);
      }
    }
    double tau = (lo + hi) / 2;
    // Golden section stalls ~sqrt(eps) short of a smooth maximum because the
    // bracketed f values tie in floats; a parabolic vertex fit per scale
    // recovers the extra digits down to ~1e-10 in t.
    for (double h : {1e-4, 1e-6}) {
      double fm = f(tau - h), f0 = f(tau), fp = f(tau + h);
      double denom = fm - 2 * f0 + fp;
      if (denom < 0) {
        double step = 0.5 * h * (fm - fp) / denom;
        if (std::abs(step) <= h) tau += step;
      }
    }
    if (!out.empty() && std::abs(out.back().cert.tau - tau) < 1e-8) continue;
    out.push_back(pst_check(a, u, v, tau, tol));
  }
  return out;
}

// Fractional revival on S at tau: the walk columns of S must stay inside S.
inline FRResult fr_check(const LabeledMatrix<Cx>& a, const std::vector<std::string>& s,
                         double tau, const Tolerances& tol = {}) {
  std::vector<int> idx = subset_indices(a, s);
  std::vector<char> in_s(size_t(a.entries.rows), 0);
  for (int i : idx) in_s[size_t(i)] = 1;
  detail::HermEvolver ev = detail::HermEvolver::build(a, tol);
  Eigen::MatrixXcd ut = ev.at(tau);
  FRResult res;
  res.leaked = -1;
  for (size_t c = 0; c < idx.size(); ++c) {
    double leak = 0;
    for (int w = 0; w < a.entries.rows; ++w)
      if (!in_s[size_t(w)]) leak += std::norm(ut(w, idx[c]));
    if (leak > res.leaked) {
      res.leaked = leak;
      res.worst_label = s[c];
    }
  }
  res.ok = res.leaked <= tol.pst;
  res.h = Mat<Cx>(int(idx.size()), int(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) res.h(int(i), int(j)) = ut(idx[i], idx[j]);
  return res;
}

// Equal reductions force equal restricted walks; checks exactly that.  The
// reduction comparison comes first -- a mismatch means the question is vacuous.
template <class F>
bool walk_equivalence_check(const LabeledMatrix<F>& a1, const std::vector<std::string>& s1,
                            const LabeledMatrix<F>& a2, const std::vector<std::string>& s2,
                            const std::vector<double>& times, const Tolerances& tol = {}) {
  std::vector<int> i1 = subset_indices(a1, s1);
  std::vector<int> i2 = subset_indices(a2, s2);
  if (i1.size() != i2.size())
    throw Error(ErrorCode::DimensionMismatch, "subsets have different sizes");
  RatMatrix<F> r1 = reduce(a1, s1, tol);
  RatMatrix<F> r2 = reduce(a2, s2, tol);
  if (!rm_agree(r1, r2, tol))
    throw Error(ErrorCode::ReductionsDiffer, "the two reductions disagree");
  LabeledMatrix<Cx> c1 = make_labeled(a1.labels, mat_to_cx(a1.entries), tol);
  LabeledMatrix<Cx> c2 = make_labeled(a2.labels, mat_to_cx(a2.entries), tol);
  WalkSample w1 = restricted_walk(c1, s1, times, tol);
  WalkSample w2 = restricted_walk(c2, s2, times, tol);
  for (size_t k = 0; k < times.size(); ++k)
    if (mat_max_abs_diff(w1.blocks[k], w2.blocks[k]) > tol.eps) return false;
  return true;
}

// --- trig polynomial walks and the inverse direction -------------------------

// One cos(k t) or sin(k t) term of a restricted-walk entry.
template <class F>
struct TrigTerm {
  F amp;
  int freq = 0;
  bool is_sin = false;
};

template <class F>
struct TrigWalkSpec {
  Mat<std::vector<TrigTerm<F>>> entries;  // s x s
};

// Exact exponential-polynomial scratchpad: map integer frequency -> amplitude
// of e^{i m t}.  Used to linearize powers of cos t and i sin t.
template <class F>
using ExpPoly = std::map<long, F>;

namespace detail {

template <class F>
ExpPoly<F> expoly_mul(const ExpPoly<F>& a, const ExpPoly<F>& b) {
  ExpPoly<F> r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      F& slot = r[ma + mb];
      slot = slot + ca * cb;
    }
  return r;
}

template <class F>
ExpPoly<F> expoly_axpy(ExpPoly<F> a, const F& s, const ExpPoly<F>& b) {
  for (const auto& [m, c] : b) {
    F& slot = a[m];
    slot = slot + s * c;
  }
  return a;
}

}  // namespace detail

// p evaluated at an exponential polynomial (Horner), p given by ascending
// scalar coefficients.
template <class F>
ExpPoly<F> poly_at_expoly(const std::vector<F>& p, const ExpPoly<F>& base) {
  ExpPoly<F> acc;
  for (size_t k = p.size(); k-- > 0;) {
    acc = detail::expoly_mul(acc, base);
    F& slot = acc[0];
    slot = slot + p[k];
  }
  return acc;
}

template <class F>
ExpPoly<F> expoly_cos() {  // cos t
  ExpPoly<F> e;
  F half = FieldTraits<F>::one() / FieldTraits<F>::from_int(2);
  e[1] = half;
  e[-1] = half;
  return e;
}

template <class F>
ExpPoly<F> expoly_isin() {  // i sin t
  ExpPoly<F> e;
  F half = FieldTraits<F>::one() / FieldTraits<F>::from_int(2);
  e[1] = half;
  e[-1] = FieldTraits<F>::zero() - half;
  return e;
}

// Collapse +-m exponential pairs into cos/sin terms:
// c e^{imt} + d e^{-imt} = (c + d) cos mt + i (c - d) sin mt.
template <class F>
std::vector<TrigTerm<F>> expoly_to_trig(const ExpPoly<F>& e) {
  std::vector<TrigTerm<F>> out;
  auto get = [&](long m) {
    auto it = e.find(m);
    return it == e.end() ? FieldTraits<F>::zero() : it->second;
  };
  std::vector<long> freqs;
  for (const auto& [m, c] : e) freqs.push_back(m < 0 ? -m : m);
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  for (long m : freqs) {
    if (m == 0) {
      F c = get(0);
      if (!FieldTraits<F>::is_zero(c)) out.push_back({c, 0, false});
      continue;
    }
    F cs = get(m) + get(-m);
    F sn = FieldTraits<F>::i() * (get(m) - get(-m));
    if (!FieldTraits<F>::is_zero(cs)) out.push_back({cs, int(m), false});
    if (!FieldTraits<F>::is_zero(sn)) out.push_back({sn, int(m), true});
  }
  return out;
}

// Laplace transform of the trig spec with s = -i lambda, entrywise:
//   L[cos kt] = s/(s^2+k^2) -> -i lambda / (k^2 - lambda^2)
//   L[sin kt] = k/(s^2+k^2) ->        k / (k^2 - lambda^2)
// then R = lambda I - i (..)^{-1}.  A transform singular over the function
// field means the spec is not a restricted unitary walk.
template <class F>
RatMatrix<F> reduction_from_trig_walk(const TrigWalkSpec<F>& spec, const Tolerances& tol = {}) {
  const int s = spec.entries.rows;
  if (s != spec.entries.cols || s == 0)
    throw Error(ErrorCode::DimensionMismatch, "trig walk spec must be square and nonempty");
  const F one = FieldTraits<F>::one(), im = FieldTraits<F>::i();
  RatMatrix<F> t(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      RationalFunction<F> acc = rf_from_const(FieldTraits<F>::zero());
      for (const TrigTerm<F>& term : spec.entries(i, j)) {
        RationalFunction<F> l;
        F k2 = FieldTraits<F>::from_int(term.freq) * FieldTraits<F>::from_int(term.freq);
        if (term.is_sin) {
          if (term.freq == 0) continue;  // sin 0t = 0
          l = RationalFunction<F>{
              Polynomial<F>::constant(term.amp * FieldTraits<F>::from_int(term.freq)),
              Polynomial<F>(std::vector<F>{k2, FieldTraits<F>::zero(),
                                           FieldTraits<F>::zero() - one})};
        } else if (term.freq == 0) {
          // L[1] = 1/s -> i/lambda
          l = RationalFunction<F>{Polynomial<F>::constant(term.amp * im),
                                  Polynomial<F>(std::vector<F>{FieldTraits<F>::zero(), one})};
        } else {
          l = RationalFunction<F>{
              Polynomial<F>(std::vector<F>{FieldTraits<F>::zero(),
                                           (FieldTraits<F>::zero() - im) * term.amp}),
              Polynomial<F>(std::vector<F>{k2, FieldTraits<F>::zero(),
                                           FieldTraits<F>::zero() - one})};
        }
        acc = rf_add(acc, l, tol);
      }
      t(i, j) = acc;
    }
  RatMatrix<F> inv;
  try {
    inv = rm_inverse(t, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularOverFunctionField)
      throw Error(ErrorCode::SingularTransform,
                  "transformed walk matrix is singular over the function field");
    throw;
  }
  return rm_sub(rm_lambda_identity<F>(s), rm_scale(rf_from_const(im), inv, tol), tol);
}

}  // namespace specred
