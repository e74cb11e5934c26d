#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <string>

#include "specred/error.hpp"

namespace specred {

using Rat = boost::multiprecision::cpp_rational;
using Cx = std::complex<double>;

// Shared tolerance bundle.  eps: float scalar equality; delta: root clustering /
// pole identification; the rest are the pipeline thresholds they are named after.
struct Tolerances {
  double eps = 1e-9;
  double delta = 1e-6;
  double pole = 1e-8;
  double psd = 1e-8;
  double rank = 1e-10;
  double pst = 1e-8;
};

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Element of Q(i): exact rational real and imaginary parts.
struct GaussianRational {
  Rat re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(int v) : re(v), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}
  GaussianRational(const Rat& r) : re(r), im(0) {}
  GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }
  Rat norm() const { return re * re + im * im; }  // |z|^2, exact

  Cx to_complex() const { return {to_double(re), to_double(im)}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rat n = b.norm();
    if (n == 0) throw Error(ErrorCode::ZeroDenominator, "division by zero scalar");
    GaussianRational p = a * b.conj();
    return {p.re / n, p.im / n};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  static GaussianRational i() { return {Rat(0), Rat(1)}; }
};

inline std::string to_string(const Rat& r) { return r.str(); }

inline std::string to_string(const GaussianRational& z) {
  if (z.im == 0) return z.re.str();
  if (z.re == 0) return z.im.str() + "*i";
  std::string s = z.re.str();
  if (z.im > 0) s += "+";
  return s + z.im.str() + "*i";
}

// Scalar equality for the float backend: |a-b| <= eps * max(1, |a|, |b|).
inline bool approx_eq(const Cx& a, const Cx& b, double eps) {
  return std::abs(a - b) <= eps * std::max({1.0, std::abs(a), std::abs(b)});
}

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {1}; }
  static GaussianRational i() { return GaussianRational::i(); }
  static GaussianRational conj(const GaussianRational& a) { return a.conj(); }
  static bool is_zero(const GaussianRational& a) { return a.is_zero(); }
  static bool is_real(const GaussianRational& a) { return a.im == 0; }
  static double abs_approx(const GaussianRational& a) { return std::abs(a.to_complex()); }
  static Cx to_complex(const GaussianRational& a) { return a.to_complex(); }
  static GaussianRational from_int(long v) { return {v}; }
};

template <>
struct FieldTraits<Cx> {
  static constexpr bool exact = false;
  static Cx zero() { return {0.0, 0.0}; }
  static Cx one() { return {1.0, 0.0}; }
  static Cx i() { return {0.0, 1.0}; }
  static Cx conj(const Cx& a) { return std::conj(a); }
  static bool is_zero(const Cx& a) { return a == Cx{0.0, 0.0}; }
  static bool is_real(const Cx& a) { return a.imag() == 0.0; }
  static double abs_approx(const Cx& a) { return std::abs(a); }
  static Cx to_complex(const Cx& a) { return a; }
  static Cx from_int(long v) { return {double(v), 0.0}; }
};

}  // namespace specred
