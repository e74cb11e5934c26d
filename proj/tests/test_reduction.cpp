#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "specred/numeric.hpp"
#include "specred/reduction.hpp"
#include "test_util.hpp"

using namespace specred;
using testutil::GR;

namespace {

Mat<GR> gm(std::vector<std::vector<int>> v) {
  Mat<GR> m(int(v.size()), int(v[0].size()));
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v[i].size(); ++j) m(int(i), int(j)) = GR(v[i][j]);
  return m;
}

const RationalFunction<GR> one_over_lambda = rf_normalize(
    Polynomial<GR>::one(), Polynomial<GR>::x());

}  // namespace

TEST_CASE("K2 reduces to [[1/lambda]]") {
  auto k2 = make_labeled(gm({{0, 1}, {1, 0}}));
  RatMatrix<GR> r = reduce(k2, {"0"});
  REQUIRE(r.rows == 1);
  CHECK(r(0, 0) == one_over_lambda);
}

TEST_CASE("P3 endpoint reduction is 1/lambda in every entry") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  RatMatrix<GR> r = reduce(p3, {"0", "2"});
  for (const auto& e : r.a) CHECK(e == one_over_lambda);
}

TEST_CASE("selector errors: empty, unknown, duplicate labels") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  CHECK_THROWS_AS(reduce(p3, {}), Error);
  CHECK_THROWS_AS(reduce(p3, {"7"}), Error);
  CHECK_THROWS_AS(reduce(p3, {"0", "0"}), Error);
}

TEST_CASE("characteristic polynomial identity on random exact matrices") {
  std::mt19937 g(41);
  for (int trial = 0; trial < 12; ++trial) {
    auto a = testutil::rand_labeled_gr(g, 5);
    auto s = testutil::rand_subset(g, 5, 2);
    CharPolyIdentity<GR> id = char_poly_identity(a, s);
    CHECK(id.equal);
  }
}

TEST_CASE("both reduction formulas agree, exact and float") {
  std::mt19937 g(42);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = testutil::rand_labeled_gr(g, 5);
    auto s = testutil::rand_subset(g, 5, 2);
    CHECK(reduce_via_formula2(a, s) == reduce(a, s));
  }
  for (int trial = 0; trial < 10; ++trial) {
    auto a = testutil::rand_labeled_herm_cx(g, 6);
    auto s = testutil::rand_subset(g, 6, 2);
    SampledEquality eq = rm_sampled_equal(reduce_via_formula2(a, s), reduce(a, s));
    CHECK(eq.equal);
    CHECK(eq.max_dev < 1e-9);
  }
}

TEST_CASE("indicator frames reproduce the subset reduction") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  Mat<GR> sig(3, 2, GR(0));
  sig(0, 0) = GR(1);
  sig(2, 1) = GR(1);
  CHECK(reduce_frame(p3, sig) == reduce(p3, {"0", "2"}));
}

TEST_CASE("frames must have orthonormal columns") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  Mat<GR> bad(3, 2, GR(0));
  bad(0, 0) = GR(2);
  bad(2, 1) = GR(1);
  CHECK_THROWS_AS(reduce_frame(p3, bad), Error);
}

TEST_CASE("sequential reduction commutes with direct reduction") {
  std::mt19937 g(43);
  auto p4 = make_labeled(gm({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}));
  CHECK(reduce_sequential_check(p4, {"0", "1", "3"}, {"0", "3"}));
  for (int trial = 0; trial < 8; ++trial) {
    auto a = testutil::rand_labeled_gr(g, 5);
    CHECK(reduce_sequential_check(a, {"1", "2", "4"}, {"1", "4"}));
  }
}

TEST_CASE("frame composition matches the composed frame") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  Mat<GR> sig1(3, 2, GR(0));
  sig1(0, 0) = GR(1);
  sig1(2, 1) = GR(1);
  Mat<GR> sig2(2, 1, GR(0));
  sig2(1, 0) = GR(1);
  CHECK(frame_sequential_check(p3, sig1, sig2));
}

TEST_CASE("frame determinant identity against a unitary completion") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  Mat<GR> sig(3, 2, GR(0));
  sig(0, 0) = GR(1);
  sig(2, 1) = GR(1);
  Mat<GR> delta(3, 1, GR(0));
  delta(1, 0) = GR(1);
  CHECK(frame_det_check(p3, sig, delta));
  Mat<GR> not_unitary(3, 1, GR(1));
  CHECK_THROWS_AS(frame_det_check(p3, sig, not_unitary), Error);
}

TEST_CASE("walk series of K2 at one vertex") {
  auto k2 = make_labeled(gm({{0, 1}, {1, 0}}));
  WalkSeries<GR> ret = walk_series_returning(k2, {"0"}, 4);
  WalkSeries<GR> star = walk_series_nonreturning(k2, {"0"}, 4);
  // closed walks alternate 1,0,1,0,1; the only first-return walk has length 2
  int want_ret[] = {1, 0, 1, 0, 1}, want_star[] = {0, 0, 1, 0, 0};
  for (int l = 0; l <= 4; ++l) {
    CHECK(ret.coeffs[size_t(l)](0, 0) == GR(want_ret[l]));
    CHECK(star.coeffs[size_t(l)](0, 0) == GR(want_star[l]));
  }
}

TEST_CASE("brute force enumeration equals the power formula") {
  std::mt19937 g(44);
  for (int trial = 0; trial < 6; ++trial) {
    auto a = testutil::rand_graph01(g, 6, 0.5);
    auto s = testutil::rand_subset(g, 6, 2);
    WalkSeries<GR> fast = walk_series_returning(a, s, 5);
    WalkSeries<GR> slow = walk_series_brute(a, s, 5);
    for (int l = 0; l <= 5; ++l)
      for (size_t k = 0; k < fast.coeffs[size_t(l)].a.size(); ++k)
        CHECK(fast.coeffs[size_t(l)].a[k] == slow.coeffs[size_t(l)].a[k]);
  }
}

TEST_CASE("returning and non-returning series satisfy the geometric identity") {
  std::mt19937 g(45);
  auto c4 = make_labeled(gm({{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}}));
  CHECK(walk_identity_check(c4, {"0"}, 8));
  for (int trial = 0; trial < 8; ++trial) {
    auto a = testutil::rand_graph01(g, 7, 0.4);
    auto s = testutil::rand_subset(g, 7, 2);
    CHECK(walk_identity_check(a, s, 8));
  }
}

TEST_CASE("weighted walks also satisfy the identity") {
  std::mt19937 g(46);
  auto a = testutil::rand_labeled_gr(g, 5, true);
  CHECK(walk_identity_check(a, {"1", "3"}, 6));
}

TEST_CASE("P3 endpoints are cospectral, endpoint and center are not") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  CHECK(cospectral_check(p3, "0", "2"));
  CHECK(cospectral_deletion_oracle(p3, "0", "2"));
  CHECK_FALSE(cospectral_check(p3, "0", "1"));
  CHECK_FALSE(cospectral_deletion_oracle(p3, "0", "1"));
}

TEST_CASE("cospectrality check agrees with the deletion oracle on random graphs") {
  std::mt19937 g(47);
  int disagreements = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testutil::rand_graph01(g, 6, 0.5);
    bool lhs = cospectral_check(a, "1", "2");
    bool rhs = cospectral_deletion_oracle(a, "1", "2");
    if (lhs != rhs) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("residue at a complement eigenvalue is C E_mu D") {
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  ResidueReport<GR> rr = residue_check(p3, {"0", "2"}, GR(0));
  CHECK(rr.is_pole);
  CHECK(rr.equal);
  CHECK(rr.expected(0, 0) == GR(1));
}

TEST_CASE("residue check on float hermitian instances") {
  std::mt19937 g(48);
  Tolerances tol;
  for (int trial = 0; trial < 10; ++trial) {
    auto a = testutil::rand_labeled_herm_cx(g, 6);
    auto s = testutil::rand_subset(g, 6, 2);
    std::vector<int> idx = subset_indices(a, s);
    std::vector<int> fc = complement_indices(6, idx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        to_eigen(mat_submatrix(a.entries, fc, fc)));
    Cx mu(es.eigenvalues()(1), 0);
    ResidueReport<Cx> rr = residue_check(a, s, mu, tol);
    CHECK(rr.is_pole);
    CHECK(rr.equal);
    CHECK(testutil::mat_dev(rr.expected, rr.actual) < 1e-8);
  }
}

TEST_CASE("reduction is additive over an edge split") {
  SplitPart<GR> p1{gm({{0}}), gm({{1}}), gm({{1}}), gm({{0}})};
  SplitPart<GR> p2{gm({{0}}), gm({{1, 0}}), gm({{1}, {0}}), gm({{0, 1}, {1, 0}})};
  CHECK(edge_split_check<GR>({p1, p2}));
}

TEST_CASE("conjugating the complement leaves the reduction unchanged") {
  std::mt19937 g(49);
  auto p3 = make_labeled(gm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  Mat<GR> q = gm({{0, 1}, {1, 0}});
  CHECK(similarity_invariance_check(p3, {"0"}, q));
  for (int trial = 0; trial < 6; ++trial) {
    auto a = testutil::rand_labeled_gr(g, 5);
    // random integer unimodular Q: product of elementary row additions
    Mat<GR> u = mat_identity<GR>(3);
    std::uniform_int_distribution<int> pick(0, 2), coef(-2, 2);
    for (int step = 0; step < 4; ++step) {
      int i = pick(g), j = pick(g);
      if (i == j) continue;
      GR c(coef(g));
      for (int k = 0; k < 3; ++k) u(i, k) = u(i, k) + c * u(j, k);
    }
    CHECK(similarity_invariance_check(a, {"1", "2"}, u));
  }
}

TEST_CASE("an eigenpair restricts to an eigenpair of the evaluated reduction") {
  // K3: eigenvalue 2 with the all-ones vector; poles of R sit at 1 and -1
  auto k3 = make_labeled(gm({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  std::vector<GR> v{GR(1), GR(1), GR(1)};
  CHECK(eigvec_restriction_check(k3, Selector<GR>::of_subset({"0", "1"}), GR(2), v));
  std::vector<GR> not_eig{GR(1), GR(0), GR(0)};
  CHECK_THROWS_AS(
      eigvec_restriction_check(k3, Selector<GR>::of_subset({"0", "1"}), GR(2), not_eig), Error);
}

TEST_CASE("float eigenpair restriction on a random hermitian matrix") {
  std::mt19937 g(50);
  Tolerances tol;
  auto a = testutil::rand_labeled_herm_cx(g, 6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a.entries));
  // top eigenvalue: strictly outside the complement spectrum by interlacing
  Cx lambda0(es.eigenvalues()(5), 0);
  std::vector<Cx> u;
  for (int i = 0; i < 6; ++i) u.push_back(es.eigenvectors()(i, 5));
  CHECK(eigvec_restriction_check(a, Selector<Cx>::of_subset({"1", "4"}), lambda0, u, tol));
}
