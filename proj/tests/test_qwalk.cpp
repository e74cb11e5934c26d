#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specred/demos.hpp"
#include "specred/graphs.hpp"
#include "specred/numeric.hpp"
#include "specred/qwalk.hpp"
#include "specred/unfolding.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace specred;
using testutil::GR;

namespace {

const double PI = 3.14159265358979323846;

LabeledMatrix<Cx> k2() {
  Mat<Cx> m(2, 2);
  m(0, 1) = 1;
  m(1, 0) = 1;
  return make_labeled({"1", "2"}, m);
}

LabeledMatrix<Cx> cycle4() {
  Mat<Cx> m(4, 4);
  for (int i = 0; i < 4; ++i) {
    m(i, (i + 1) % 4) = 1;
    m((i + 1) % 4, i) = 1;
  }
  return make_labeled({"1", "2", "3", "4"}, m);
}

}  // namespace

TEST_CASE("evolve: identity at t=0 and closed form on K2") {
  auto a = k2();
  CHECK(testutil::mat_dev(evolve(a, 0.0), mat_identity<Cx>(2)) < 1e-12);
  // e^{-itA} = cos(t) I - i sin(t) A for an involution A
  auto u = evolve(a, PI / 2);
  CHECK(std::abs(u(0, 0)) < 1e-12);
  CHECK(std::abs(u(0, 1) - Cx(0, -1)) < 1e-12);
  auto u3 = evolve(a, 0.3);
  CHECK(std::abs(u3(0, 0) - Cx(std::cos(0.3), 0)) < 1e-12);
  CHECK(std::abs(u3(1, 0) - Cx(0, -std::sin(0.3))) < 1e-12);
}

TEST_CASE("evolve: unitarity and the group law on random Hermitian matrices") {
  std::mt19937 g(71);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = testutil::rand_labeled_herm_cx(g, 7);
    Eigen::MatrixXcd us = to_eigen(evolve(a, 0.7));
    Eigen::MatrixXcd ut = to_eigen(evolve(a, -1.3));
    CHECK((us.adjoint() * us - Eigen::MatrixXcd::Identity(7, 7)).norm() < 1e-10);
    CHECK(testutil::mat_dev(from_eigen(us * ut), evolve(a, 0.7 - 1.3)) < 1e-9);
  }
}

TEST_CASE("restricted_walk: K2 watched from one endpoint is cos t") {
  auto w = restricted_walk(k2(), {"1"}, {0.3, 1.1, 2.9});
  REQUIRE(w.blocks.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(w.blocks[i].rows == 1);
    CHECK(std::abs(w.blocks[i](0, 0) - Cx(std::cos(w.times[i]), 0)) < 1e-12);
  }
  CHECK(w.subset == std::vector<std::string>{"1"});
}

TEST_CASE("restricted_walk: whole-graph subset returns the full unitary") {
  auto a = cycle4();
  auto w = restricted_walk(a, {"1", "2", "3", "4"}, {0.8});
  CHECK(testutil::mat_dev(w.blocks[0], evolve(a, 0.8)) < 1e-12);
}

TEST_CASE("pst_check: K2 transfers perfectly at pi/2 with phase -i") {
  auto out = pst_check(k2(), "1", "2", PI / 2);
  CHECK(out.certified);
  CHECK(out.mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(out.cert.gamma - Cx(0, -1)) < 1e-10);
  CHECK(out.cert.deviation < 1e-10);
}

TEST_CASE("pst_check: P4 endpoints never reach full transfer at pi/2") {
  Mat<Cx> m(4, 4);
  for (int i = 0; i + 1 < 4; ++i) {
    m(i, i + 1) = 1;
    m(i + 1, i) = 1;
  }
  auto a = make_labeled({"1", "2", "3", "4"}, m);
  auto out = pst_check(a, "1", "4", PI / 2);
  CHECK_FALSE(out.certified);
  CHECK(out.mass == doctest::Approx(0.194623).epsilon(1e-4));
}

TEST_CASE("pst_check: same vertex twice is rejected") {
  CHECK_THROWS_AS(pst_check(k2(), "1", "1", 1.0), Error);
}

TEST_CASE("pst_scan: K2 on [0,pi] localizes tau = pi/2 to 1e-9") {
  auto cands = pst_scan(k2(), "1", "2", PI, 40);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].certified);
  CHECK(std::abs(cands[0].cert.tau - PI / 2) < 1e-9);
  CHECK(cands[0].cert.deviation < 1e-8);
}

TEST_CASE("pst_scan: C4 adjacent vertices certify nowhere on [0,2pi]") {
  for (const auto& c : pst_scan(cycle4(), "1", "2", 2 * PI, 80)) CHECK_FALSE(c.certified);
}

TEST_CASE("pst_check: Q4 antipodes transfer at pi/2") {
  auto q4 = hypercube<Cx>(4);
  auto out = pst_check(q4, "0000", "1111", PI / 2);
  CHECK(out.certified);
  CHECK(out.mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.cert.deviation < 1e-10);
}

TEST_CASE("fr_check: whole graph is trivially closed under the walk") {
  auto a = cycle4();
  auto r = fr_check(a, {"1", "2", "3", "4"}, 1.234);
  CHECK(r.ok);
  CHECK(r.leaked < 1e-12);
  CHECK(testutil::mat_dev(r.h, evolve(a, 1.234)) < 1e-12);
}

TEST_CASE("fr_check: Q4 antipodal pair at pi/2 revives with an off-diagonal block") {
  auto q4 = hypercube<Cx>(4);
  auto r = fr_check(q4, {"0000", "1111"}, PI / 2);
  CHECK(r.ok);
  CHECK(std::abs(r.h(0, 0)) < 1e-10);
  CHECK(std::abs(std::abs(r.h(0, 1)) - 1.0) < 1e-10);
  CHECK(std::abs(r.h(1, 1)) < 1e-10);
}

TEST_CASE("fr_check: a leaking subset reports the escaped mass") {
  auto r = fr_check(k2(), {"1"}, 0.7);
  CHECK_FALSE(r.ok);
  CHECK(r.worst_label == "1");
  double s = std::sin(0.7);
  CHECK(r.leaked == doctest::Approx(s * s).epsilon(1e-10));
}

TEST_CASE("walk_equivalence_check: conjugating the tail by a unitary preserves the walk") {
  std::mt19937 g(72);
  auto a1 = testutil::rand_labeled_herm_cx(g, 7);
  Eigen::MatrixXcd z(5, 5);
  std::uniform_real_distribution<double> ud(-1, 1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) z(i, j) = Cx(ud(g), ud(g));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(7, 7);
  x.block(2, 2, 5, 5) = Eigen::MatrixXcd(qr.householderQ());
  auto a2 = make_labeled(a1.labels, from_eigen(x * to_eigen(a1.entries) * x.adjoint()));
  CHECK(walk_equivalence_check(a1, {a1.labels[0], a1.labels[1]}, a2,
                               {a2.labels[0], a2.labels[1]}, {0.2, 0.9, 2.2}, Tolerances{}));
}

TEST_CASE("walk_equivalence_check: Q4 and Q3 antipodal pairs are genuinely different") {
  auto q4 = hypercube<GR>(4);
  auto q3 = hypercube<GR>(3);
  try {
    walk_equivalence_check(q4, {"0000", "1111"}, q3, {"000", "111"}, {0.5}, Tolerances{});
    FAIL("expected ReductionsDiffer");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReductionsDiffer);
  }
}

TEST_CASE("expoly: cos t and i sin t as exponential polynomials") {
  auto c = expoly_cos<GR>();
  REQUIRE(c.size() == 2);
  CHECK(c.at(1) == GR(Rat(1, 2)));
  CHECK(c.at(-1) == GR(Rat(1, 2)));
  auto s = expoly_isin<GR>();
  REQUIRE(s.size() == 2);
  CHECK(s.at(1) == GR(Rat(1, 2)));
  CHECK(s.at(-1) == GR(Rat(-1, 2)));
}

TEST_CASE("expoly: squares linearize to double-angle identities") {
  // cos^2 t = 1/2 + cos(2t)/2
  std::vector<GR> sq{GR(0), GR(0), GR(1)};
  auto tc = expoly_to_trig(poly_at_expoly(sq, expoly_cos<GR>()));
  REQUIRE(tc.size() == 2);
  CHECK(tc[0].freq == 0);
  CHECK(tc[0].amp == GR(Rat(1, 2)));
  CHECK_FALSE(tc[0].is_sin);
  CHECK(tc[1].freq == 2);
  CHECK(tc[1].amp == GR(Rat(1, 2)));
  CHECK_FALSE(tc[1].is_sin);
  // (i sin t)^2 = -1/2 + cos(2t)/2
  auto ts = expoly_to_trig(poly_at_expoly(sq, expoly_isin<GR>()));
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].amp == GR(Rat(-1, 2)));
  CHECK(ts[1].amp == GR(Rat(1, 2)));
  CHECK_FALSE(ts[1].is_sin);
}

namespace {

// p(x) = (x^15 + 3x^11 + 3x^7 + x^3) / 8, the odd polynomial behind the
// engineered two-vertex transfer walk.
std::vector<GR> transfer_poly() {
  std::vector<GR> p(16, GR(0));
  p[3] = GR(Rat(1, 8));
  p[7] = GR(Rat(3, 8));
  p[11] = GR(Rat(3, 8));
  p[15] = GR(Rat(1, 8));
  return p;
}

}  // namespace

TEST_CASE("expoly: linearizing p(cos t) and p(i sin t) gives the frozen amplitudes") {
  auto p = transfer_poly();
  // amplitudes scaled by 2^17 are integers
  const long mag[8] = {67779, 41069, 16299, 4773, 983, 153, 15, 1};
  auto terms = expoly_to_trig(poly_at_expoly(p, expoly_cos<GR>()));
  REQUIRE(terms.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(terms[size_t(k)].freq == 2 * k + 1);
    CHECK_FALSE(terms[size_t(k)].is_sin);
    CHECK(terms[size_t(k)].amp * GR(131072) == GR(mag[k]));
  }
  auto sterms = expoly_to_trig(poly_at_expoly(p, expoly_isin<GR>()));
  REQUIRE(sterms.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(sterms[size_t(k)].freq == 2 * k + 1);
    CHECK(sterms[size_t(k)].is_sin);
    long sign = (k % 2 == 0) ? -1 : 1;
    CHECK(sterms[size_t(k)].amp * GR(131072) == GR(Rat(0), Rat(sign * mag[k])));
  }
  // the packaged walk spec is exactly this linearization
  auto spec = demos::transfer_walk_spec();
  REQUIRE(spec.entries.rows == 2);
  auto same = [](const std::vector<TrigTerm<GR>>& a, const std::vector<TrigTerm<GR>>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!(a[i].amp == b[i].amp) || a[i].freq != b[i].freq || a[i].is_sin != b[i].is_sin)
        return false;
    return true;
  };
  CHECK(same(spec.entries(0, 0), terms));
  CHECK(same(spec.entries(1, 1), terms));
  CHECK(same(spec.entries(0, 1), sterms));
  CHECK(same(spec.entries(1, 0), sterms));
}

TEST_CASE("reduction_from_trig_walk: [[cos t]] comes from the 1/lambda reduction") {
  TrigWalkSpec<GR> spec;
  spec.entries = Mat<std::vector<TrigTerm<GR>>>(1, 1);
  spec.entries(0, 0).push_back({GR(1), 1, false});
  auto r = reduction_from_trig_walk(spec);
  RationalFunction<GR> expect{Polynomial<GR>::one(), Polynomial<GR>::x()};
  CHECK(r(0, 0) == expect);
}

TEST_CASE("reduction_from_trig_walk: the stationary walk comes from the zero matrix") {
  TrigWalkSpec<GR> spec;
  spec.entries = Mat<std::vector<TrigTerm<GR>>>(1, 1);
  spec.entries(0, 0).push_back({GR(1), 0, false});
  auto r = reduction_from_trig_walk(spec);
  CHECK(r(0, 0).num.is_zero());
}

TEST_CASE("transfer walk spec: reduction, feasibility, unfolding, and round trip") {
  Tolerances tol;
  auto spec = demos::transfer_walk_spec();
  auto rg = reduction_from_trig_walk(spec, tol);

  // numerator/denominator degrees of the recovered 2x2 reduction
  CHECK(rg(0, 0).num.deg() == 13);
  CHECK(rg(0, 0).den.deg() == 14);
  CHECK(rg(0, 1).num.deg() == 12);
  CHECK(rg(0, 1).den.deg() == 14);

  auto rc = rm_to_cx(rg);
  auto feas = check_hermitian_feasibility(rc, tol);
  CHECK(feas.feasible);
  REQUIRE(feas.residues_psd.size() == 14);
  // poles come in symmetric pairs inside (-16, 16)
  int positive = 0;
  for (const auto& [pole, margin] : feas.residues_psd) {
    CHECK(std::abs(pole.imag()) < 1e-8);
    CHECK(std::abs(pole.real()) < 16.0);
    CHECK(margin >= -tol.psd);
    if (pole.real() > 0) ++positive;
    bool mirrored = false;
    for (const auto& [q, m2] : feas.residues_psd)
      if (std::abs(q.real() + pole.real()) < 1e-8) mirrored = true;
    CHECK(mirrored);
  }
  CHECK(positive == 7);

  auto u = unfold_hermitian(rc, tol);
  REQUIRE(u.matrix.entries.rows == 16);
  CHECK(u.subset == std::vector<std::string>{"1", "2"});

  // spectrum is exactly the odd integers -15..15
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;
  herm_eig(u.matrix.entries, vals, vecs);
  for (int i = 0; i < 16; ++i) CHECK(vals(i) == doctest::Approx(2 * i - 15).epsilon(1e-6));

  // the restricted walk of the unfolding reproduces the trig spec
  auto w = restricted_walk(u.matrix, u.subset, {0.4, 1.7}, tol);
  auto eval_terms = [](const std::vector<TrigTerm<GR>>& ts, double t) {
    Cx acc = 0;
    for (const auto& tm : ts) {
      double b = tm.is_sin ? std::sin(tm.freq * t) : std::cos(tm.freq * t);
      acc += tm.amp.to_complex() * b;
    }
    return acc;
  };
  for (size_t k = 0; k < w.times.size(); ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(std::abs(w.blocks[k](i, j) - eval_terms(spec.entries(i, j), w.times[k])) < 1e-9);
}
