#pragma once

#include <vector>

#include "specred/error.hpp"
#include "specred/scalar.hpp"

namespace specred {

// Dense row-major matrix over any ring-like element type (scalars or rational
// functions).  Only the ring operations live here; field-specific helpers are
// free functions in the modules that need them.
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c, const T& fill = T()) : rows(r), cols(c), a(size_t(r) * size_t(c), fill) {}

  T& operator()(int i, int j) { return a[size_t(i) * size_t(cols) + size_t(j)]; }
  const T& operator()(int i, int j) const { return a[size_t(i) * size_t(cols) + size_t(j)]; }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

template <class T>
void require_same_shape(const Mat<T>& x, const Mat<T>& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
}

template <class T>
Mat<T> mat_add(const Mat<T>& x, const Mat<T>& y) {
  require_same_shape(x, y);
  Mat<T> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] + y.a[k];
  return r;
}

template <class T>
Mat<T> mat_sub(const Mat<T>& x, const Mat<T>& y) {
  require_same_shape(x, y);
  Mat<T> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] - y.a[k];
  return r;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& x, const Mat<T>& y) {
  if (x.cols != y.rows)
    throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  Mat<T> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const T& v = x(i, k);
      for (int j = 0; j < y.cols; ++j) r(i, j) = r(i, j) + v * y(k, j);
    }
  return r;
}

template <class T>
Mat<T> mat_scale(const T& s, const Mat<T>& x) {
  Mat<T> r = x;
  for (T& v : r.a) v = s * v;
  return r;
}

template <class T>
Mat<T> mat_transpose(const Mat<T>& x) {
  Mat<T> r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

// Scalar-field helpers.
template <class F>
Mat<F> mat_identity(int n) {
  Mat<F> r(n, n, FieldTraits<F>::zero());
  for (int i = 0; i < n; ++i) r(i, i) = FieldTraits<F>::one();
  return r;
}

template <class F>
Mat<F> mat_conj_transpose(const Mat<F>& x) {
  Mat<F> r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = FieldTraits<F>::conj(x(i, j));
  return r;
}

template <class F>
Mat<F> mat_submatrix(const Mat<F>& x, const std::vector<int>& ri, const std::vector<int>& ci) {
  Mat<F> r(int(ri.size()), int(ci.size()));
  for (size_t i = 0; i < ri.size(); ++i)
    for (size_t j = 0; j < ci.size(); ++j) r(int(i), int(j)) = x(ri[i], ci[j]);
  return r;
}

template <class F>
double mat_max_abs_diff(const Mat<F>& x, const Mat<F>& y) {
  require_same_shape(x, y);
  double m = 0;
  for (size_t k = 0; k < x.a.size(); ++k) {
    F d = x.a[k] - y.a[k];
    m = std::max(m, FieldTraits<F>::abs_approx(d));
  }
  return m;
}

template <class F>
bool mat_is_hermitian(const Mat<F>& x, double eps) {
  if (x.rows != x.cols) return false;
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j <= i; ++j) {
      F d = x(i, j) - FieldTraits<F>::conj(x(j, i));
      if (FieldTraits<F>::abs_approx(d) > eps) return false;
    }
  return true;
}

// Gauss–Jordan inverse over the scalar field.  The error code is caller's
// choice because singularity means different things at different call sites.
template <class F>
Mat<F> mat_inverse(const Mat<F>& m, ErrorCode on_singular = ErrorCode::SingularQ) {
  if (m.rows != m.cols)
    throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const int n = m.rows;
  Mat<F> w = m, inv = mat_identity<F>(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int i = col; i < n; ++i) {
      double s = FieldTraits<F>::abs_approx(w(i, col));
      if (s > best) { best = s; piv = i; }
    }
    if (piv < 0)
      for (int i = col; i < n; ++i)
        if (!FieldTraits<F>::is_zero(w(i, col))) { piv = i; break; }
    if (piv < 0) throw Error(on_singular, "matrix is singular");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    F p = w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) = w(col, j) / p;
      inv(col, j) = inv(col, j) / p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || FieldTraits<F>::is_zero(w(i, col))) continue;
      F f = w(i, col);
      for (int j = 0; j < n; ++j) {
        w(i, j) = w(i, j) - f * w(col, j);
        inv(i, j) = inv(i, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class F>
Mat<Cx> mat_to_cx(const Mat<F>& x) {
  Mat<Cx> r(x.rows, x.cols);
  for (size_t k = 0; k < x.a.size(); ++k) r.a[k] = FieldTraits<F>::to_complex(x.a[k]);
  return r;
}

}  // namespace specred
