#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specred/ratfun.hpp"
#include "specred/roots.hpp"
#include "test_util.hpp"

using namespace specred;
using testutil::GR;

namespace {

Polynomial<GR> poly(std::vector<int> c) {
  std::vector<GR> v;
  for (int x : c) v.push_back(GR(x));
  return Polynomial<GR>(std::move(v));
}

RationalFunction<GR> rf(std::vector<int> num, std::vector<int> den) {
  return rf_normalize(poly(num), poly(den));
}

Polynomial<Cx> polyc(std::vector<double> c) {
  std::vector<Cx> v;
  for (double x : c) v.push_back(Cx(x, 0));
  return Polynomial<Cx>(std::move(v));
}

}  // namespace

TEST_CASE("normalization cancels common factors and makes the denominator monic") {
  // (x^2 - 1) / (2x - 2) -> (x + 1) / 2
  RationalFunction<GR> r = rf({-1, 0, 1}, {-2, 2});
  CHECK(r.den == Polynomial<GR>::one());
  CHECK(r.num == rf_normalize(poly({1, 1}), poly({2})).num);
  CHECK(rf_eval(r, GR(3)) == GR(2));

  // x/x -> 1, 0/q -> 0 with denominator 1
  CHECK(rf({0, 1}, {0, 1}) == rf({1}, {1}));
  RationalFunction<GR> z = rf({0}, {5, 7});
  CHECK(z.is_zero());
  CHECK(z.den == Polynomial<GR>::one());
}

TEST_CASE("zero denominator is rejected") {
  CHECK_THROWS_AS(rf_normalize(poly({1}), poly({0})), Error);
}

TEST_CASE("field arithmetic matches hand results") {
  // 1/(x-1) + 1/(x+1) = 2x/(x^2-1)
  RationalFunction<GR> a = rf({1}, {-1, 1});
  RationalFunction<GR> b = rf({1}, {1, 1});
  CHECK(a + b == rf({0, 2}, {-1, 0, 1}));
  CHECK(a * b == rf({1}, {-1, 0, 1}));
  CHECK(a - a == rf({0}, {1}));
  CHECK((a / b) == rf({1, 1}, {-1, 1}));
}

TEST_CASE("exact arithmetic satisfies field identities on random instances") {
  std::mt19937 g(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<GR> nc, dc;
    for (int k = 0; k <= 2; ++k) nc.push_back(testutil::rand_gr(g));
    for (int k = 0; k <= 2; ++k) dc.push_back(testutil::rand_gr(g));
    Polynomial<GR> pn(std::move(nc)), pd(std::move(dc));
    if (pd.is_zero()) continue;
    RationalFunction<GR> a = rf_normalize(pn, pd);
    RationalFunction<GR> b = rf({1, 2}, {3, 0, 1});
    CHECK((a + b) - b == a);
    if (!a.is_zero()) CHECK((a * b) / a == b);
    CHECK(a + rf_neg(a) == RationalFunction<GR>{});
  }
}

TEST_CASE("evaluation distributes over arithmetic, exact vs float") {
  std::mt19937 g(12);
  Tolerances tol;
  for (int trial = 0; trial < 25; ++trial) {
    RationalFunction<GR> a = rf({trial, 1, 2}, {3, 1});
    RationalFunction<GR> b = rf({1, -1}, {2, 0, 1});
    Cx x(0.37 + trial, 1.21);
    Cx lhs = rf_eval_cx(a + b, x);
    Cx rhs = rf_eval_cx(a, x) + rf_eval_cx(b, x);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
  (void)tol;
}

TEST_CASE("evaluating at a pole is an error") {
  RationalFunction<GR> a = rf({1}, {-1, 1});
  CHECK_THROWS_AS(rf_eval(a, GR(1)), Error);
  try {
    rf_eval(a, GR(1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EvaluationAtPole);
  }
}

TEST_CASE("series at infinity of 1/(x-1) is all ones") {
  RationalFunction<GR> a = rf({1}, {-1, 1});
  std::vector<GR> s = rf_series_at_infinity(a, 5);
  REQUIRE(s.size() == 6);
  for (const GR& c : s) CHECK(c == GR(1));

  // x/(x^2+1): coefficients 1, 0, -1, 0, 1, ...
  std::vector<GR> t = rf_series_at_infinity(rf({0, 1}, {1, 0, 1}), 4);
  CHECK(t[0] == GR(1));
  CHECK(t[1] == GR(0));
  CHECK(t[2] == GR(-1));
  CHECK(t[3] == GR(0));
  CHECK(t[4] == GR(1));
}

TEST_CASE("derivative follows the quotient rule") {
  // d/dx [x/(x-1)] = -1/(x-1)^2
  RationalFunction<GR> r = rf({0, 1}, {-1, 1});
  CHECK(rf_derivative(r) == rf({-1}, {1, -2, 1}));
}

TEST_CASE("partial fractions, simple exact poles") {
  // 3x/((x-1)(x+2)): residue 1 at 1, residue 2 at -2
  RationalFunction<GR> r = rf({0, 3}, {-2, 1, 1});
  ScalarPFD<GR> p = pfd_scalar(r);
  REQUIRE(p.terms.size() == 2);
  CHECK(p.constant == GR(0));
  for (const auto& t : p.terms) {
    REQUIRE(t.order == 1);
    if (t.pole == GR(1)) CHECK(t.coeffs[0] == GR(1));
    else {
      CHECK(t.pole == GR(-2));
      CHECK(t.coeffs[0] == GR(2));
    }
  }
  CHECK(pfd_to_rf(p) == r);
}

TEST_CASE("partial fractions, double pole") {
  // x/(x-1)^2 = 1/(x-1) + 1/(x-1)^2
  RationalFunction<GR> r = rf({0, 1}, {1, -2, 1});
  ScalarPFD<GR> p = pfd_scalar(r);
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms[0].pole == GR(1));
  REQUIRE(p.terms[0].order == 2);
  CHECK(p.terms[0].coeffs[0] == GR(1));
  CHECK(p.terms[0].coeffs[1] == GR(1));
  CHECK(pfd_to_rf(p) == r);
}

TEST_CASE("partial fractions, gaussian pole") {
  // 1/(x^2+1) = (i/2)/(x+i) + (-i/2)/(x-i)
  RationalFunction<GR> r = rf({1}, {1, 0, 1});
  ScalarPFD<GR> p = pfd_scalar(r);
  REQUIRE(p.terms.size() == 2);
  for (const auto& t : p.terms) {
    if (t.pole == GR::i()) CHECK(t.coeffs[0] == GR(Rat(0), Rat(-1, 2)));
    else {
      CHECK(t.pole == -GR::i());
      CHECK(t.coeffs[0] == GR(Rat(0), Rat(1, 2)));
    }
  }
  CHECK(pfd_to_rf(p) == r);
}

TEST_CASE("float partial fractions agree with exact residues") {
  Tolerances tol;
  RationalFunction<Cx> r = rf_normalize(polyc({0, 3}), polyc({-2, 1, 1}), tol);
  ScalarPFD<Cx> p = pfd_scalar(r, tol);
  REQUIRE(p.terms.size() == 2);
  for (const auto& t : p.terms) {
    double want = std::abs(t.pole - Cx(1, 0)) < 1e-6 ? 1.0 : 2.0;
    CHECK(std::abs(t.coeffs[0] - Cx(want, 0)) < 1e-10);
  }
  RationalFunction<Cx> back = pfd_to_rf(p, tol);
  for (double x : {0.3, 2.7, -5.1}) {
    Cx lx(x, 0.9);
    CHECK(std::abs(rf_eval(back, lx) - rf_eval(r, lx)) < 1e-10);
  }
}

TEST_CASE("float partial fractions survive large coefficient scales") {
  // Same simple poles, numerator and denominator both scaled by 1e12: term
  // thresholds must track the residues, not the raw coefficient magnitudes.
  Tolerances tol;
  Polynomial<Cx> num = Cx(3e12, 0) * polyc({0, 1});
  Polynomial<Cx> den = Cx(1e12, 0) * polyc({-2, 1, 1});
  ScalarPFD<Cx> p = pfd_scalar({num, den}, tol);
  CHECK(p.terms.size() == 2);
}

TEST_CASE("float pfd round trip on random proper functions") {
  std::mt19937 g(21);
  std::uniform_real_distribution<double> d(-3, 3);
  Tolerances tol;
  for (int trial = 0; trial < 30; ++trial) {
    // distinct real poles -> simple structure with known answers
    double p1 = d(g), p2 = p1 + 1.5 + std::abs(d(g)), p3 = p2 + 1.5 + std::abs(d(g));
    Polynomial<Cx> den = poly_from_roots(Cx(1, 0), {Cx(p1, 0), Cx(p2, 0), Cx(p3, 0)});
    Polynomial<Cx> num = polyc({d(g), d(g), d(g)});
    if (num.is_zero()) continue;
    RationalFunction<Cx> r = rf_normalize(num, den, tol);
    RationalFunction<Cx> back = pfd_to_rf(pfd_scalar(r, tol), tol);
    Cx x(0.171, 2.03);
    CHECK(std::abs(rf_eval(back, x) - rf_eval(r, x)) <
          1e-8 * std::max(1.0, std::abs(rf_eval(r, x))));
  }
}

TEST_CASE("polynomial roots: exact gaussian rational extraction") {
  // (x - 1)(x - i)(x + 2i)
  Polynomial<GR> p = poly_from_roots(GR(1), {GR(1), GR::i(), GR(0) - GR::i() - GR::i()});
  std::vector<GR> roots = poly_roots_exact(p);
  REQUIRE(roots.size() == 3);
  int seen = 0;
  for (const GR& r : roots)
    if (r == GR(1) || r == GR::i() || r == GR(Rat(0), Rat(-2))) ++seen;
  CHECK(seen == 3);
}

TEST_CASE("polynomial roots: float companion solve and clustering") {
  Polynomial<Cx> p = poly_from_roots(Cx(2, 0), {Cx(1, 0), Cx(1, 0), Cx(3, 0)});
  std::vector<Cx> roots = poly_roots(p);
  REQUIRE(roots.size() == 3);
  auto clusters = cluster_points(roots, 1e-6);
  REQUIRE(clusters.size() == 2);
  for (const auto& [center, mult] : clusters) {
    if (mult == 2) CHECK(std::abs(center - Cx(1, 0)) < 1e-7);
    else CHECK(std::abs(center - Cx(3, 0)) < 1e-9);
  }
}

TEST_CASE("normalization thresholds keep structurally wide float coefficients") {
  // degree-14 polynomial with roots up to ~15: constant term ~7.7e11 while the
  // lead stays 1; normalizing must not trim real coefficients.
  std::vector<Cx> roots;
  for (int k = 1; k <= 7; ++k) {
    roots.push_back(Cx(2 * k - 0.5, 0));
    roots.push_back(Cx(-(2 * k - 0.5), 0));
  }
  Polynomial<Cx> wide = poly_from_roots(Cx(1, 0), roots);
  RationalFunction<Cx> r = rf_normalize(Polynomial<Cx>::one(), wide);
  CHECK(r.den.deg() == 14);
  ScalarPFD<Cx> p = pfd_scalar(r);
  CHECK(p.terms.size() == 14);
}
