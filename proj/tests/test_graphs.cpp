#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specred/graphs.hpp"
#include "specred/iso.hpp"
#include "specred/roots.hpp"
#include "test_util.hpp"

using namespace specred;
using testutil::GR;

namespace {

// 4-vertex fixture with an equitable 3-class partition: 1 - {2,3} - 4 plus the
// 2-3 edge, so the middle class has one internal neighbor.
LabeledMatrix<GR> quotient_example() {
  Mat<GR> a(4, 4, GR(0));
  auto edge = [&](int i, int j) { a(i, j) = a(j, i) = GR(1); };
  edge(0, 1);
  edge(0, 2);
  edge(1, 2);
  edge(1, 3);
  edge(2, 3);
  return make_labeled({"1", "2", "3", "4"}, std::move(a));
}

const VertexPartition quotient_classes{{{"1"}, {"2", "3"}, {"4"}}};

}  // namespace

TEST_CASE("hypercubes: products of edges with bit-string labels") {
  auto q1 = hypercube<GR>(1);
  CHECK(q1.entries == path<GR>(2).entries);

  auto q2 = hypercube<GR>(2);
  auto prod = cartesian_product(path<GR>(2), path<GR>(2));
  CHECK(q2.entries == prod.entries);
  CHECK(q2.labels == std::vector<std::string>{"00", "01", "10", "11"});

  auto q4 = hypercube<GR>(4);
  REQUIRE(q4.entries.rows == 16);
  for (int i = 0; i < 16; ++i) {
    GR deg(0);
    for (int j = 0; j < 16; ++j) deg = deg + q4.entries(i, j);
    CHECK(deg == GR(4));
  }
}

TEST_CASE("equitable partition produces the expected divisor") {
  auto g = quotient_example();
  EquitableResult<GR> eq = is_equitable(g, quotient_classes);
  REQUIRE(eq.equitable);
  int want[3][3] = {{0, 2, 0}, {1, 1, 1}, {0, 2, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(eq.divisor(i, j) == GR(want[i][j]));
}

TEST_CASE("non-equitable partitions come with a witness pair") {
  auto p3 = path<GR>(3);
  EquitableResult<GR> eq = is_equitable(p3, VertexPartition{{{"1", "2"}, {"3"}}});
  REQUIRE_FALSE(eq.equitable);
  CHECK(eq.vertex_u != eq.vertex_v);
  CHECK(!(eq.sum_u == eq.sum_v));
}

TEST_CASE("partitions must cover every vertex exactly once") {
  auto p3 = path<GR>(3);
  CHECK_THROWS_AS(is_equitable(p3, VertexPartition{{{"1"}, {"2"}}}), Error);
  CHECK_THROWS_AS(is_equitable(p3, VertexPartition{{{"1", "2"}, {"2", "3"}}}), Error);
}

TEST_CASE("symmetrized divisor of the 4-vertex example and its eigenvalues") {
  auto g = quotient_example();
  LabeledMatrix<Cx> gf = lm_to_cx(g);
  Mat<Cx> sd = symmetrized_divisor(gf, quotient_classes);
  // sqrt(2) couplings appear between the singleton classes and the pair
  CHECK(std::abs(sd(0, 1) - Cx(std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(sd(1, 2) - Cx(std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(sd(0, 2)) < 1e-12);

  std::vector<Cx> eigs = poly_roots(char_poly(sd));
  std::vector<double> re;
  for (const Cx& e : eigs) {
    CHECK(std::abs(e.imag()) < 1e-10);
    re.push_back(e.real());
  }
  std::sort(re.begin(), re.end());
  double s17 = std::sqrt(17.0);
  CHECK(std::abs(re[0] - (1 - s17) / 2) < 1e-10);
  CHECK(std::abs(re[1] - 0.0) < 1e-10);
  CHECK(std::abs(re[2] - (1 + s17) / 2) < 1e-10);
}

TEST_CASE("the symmetrized divisor is a reduction of the original matrix") {
  auto gf = lm_to_cx(quotient_example());
  CHECK(divisor_is_reduction_check(gf, quotient_classes));
}

TEST_CASE("divisor equals the frame reduction on random equitable instances") {
  // hypercube distance partitions are equitable for every base vertex
  auto q3 = lm_to_cx(hypercube<GR>(3));
  for (const char* v : {"000", "101", "110"}) {
    VertexPartition pi = distance_partition(q3, v);
    CHECK(is_equitable(q3, pi).equitable);
    CHECK(divisor_is_reduction_check(q3, pi));
  }
}

TEST_CASE("distance partition of the 3-cube has layer sizes 1,3,3,1") {
  auto q3 = hypercube<GR>(3);
  VertexPartition pi = distance_partition(q3, "000");
  REQUIRE(pi.classes.size() == 4);
  CHECK(pi.classes[0].size() == 1);
  CHECK(pi.classes[1].size() == 3);
  CHECK(pi.classes[2].size() == 3);
  CHECK(pi.classes[3].size() == 1);
}

TEST_CASE("the 4-cube distance divisor is the binomial tridiagonal") {
  Mat<GR> d = hypercube_distance_divisor<GR>(4);
  REQUIRE(d.rows == 5);
  for (int k = 0; k < 5; ++k) {
    if (k + 1 < 5) CHECK(d(k, k + 1) == GR(4 - k));
    if (k > 0) CHECK(d(k, k - 1) == GR(k));
    CHECK(d(k, k) == GR(0));
  }
}

TEST_CASE("the block pattern from the displayed matrix is valid") {
  BlockPattern b = paper_block_pattern();
  validate_pattern(b);
  auto g = q4_variant<GR>(b);
  CHECK(g.entries.rows == 16);
  // rows keep degree 4 and distance classes keep the 4-cube divisor
  for (int i = 0; i < 16; ++i) {
    GR deg(0);
    for (int j = 0; j < 16; ++j) deg = deg + g.entries(i, j);
    CHECK(deg == GR(4));
  }
}

TEST_CASE("broken patterns are rejected") {
  BlockPattern b = paper_block_pattern();
  b.bits[0][0] = 0;
  CHECK_THROWS_AS(q4_variant<GR>(b), Error);
  try {
    q4_variant<GR>(b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPattern);
  }
}

TEST_CASE("variant enumeration yields pairwise non-isomorphic valid graphs") {
  Tolerances tol;
  std::vector<LabeledMatrix<GR>> family = enumerate_q4_variants<GR>(4, tol);
  REQUIRE(family.size() >= 4);

  std::vector<std::vector<std::vector<int>>> adj;
  for (const auto& g : family) {
    std::vector<std::vector<int>> a(16, std::vector<int>(16, 0));
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) a[size_t(i)][size_t(j)] = g.entries(i, j) == GR(1) ? 1 : 0;
    adj.push_back(std::move(a));
  }
  for (size_t i = 0; i < adj.size(); ++i)
    for (size_t j = i + 1; j < adj.size(); ++j) CHECK_FALSE(graph_isomorphic(adj[i], adj[j]));

  // every member carries the 4-cube's distance divisor between its endpoints
  Mat<GR> want = hypercube_distance_divisor<GR>(4);
  for (const auto& g : family) {
    VertexPartition pi = distance_partition(g, g.labels.front());
    EquitableResult<GR> eq = is_equitable(g, pi);
    REQUIRE(eq.equitable);
    REQUIRE(eq.divisor.rows == want.rows);
    for (size_t k = 0; k < want.a.size(); ++k) CHECK(eq.divisor.a[k] == want.a[k]);
  }
}

TEST_CASE("isomorphism test: positives and negatives") {
  auto to_adj = [](const LabeledMatrix<GR>& g) {
    int n = g.entries.rows;
    std::vector<std::vector<int>> a(size_t(n), std::vector<int>(size_t(n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[size_t(i)][size_t(j)] = g.entries(i, j) == GR(1) ? 1 : 0;
    return a;
  };
  auto p4 = to_adj(path<GR>(4));
  // relabeled path: swap interior vertices
  std::vector<std::vector<int>> p4b(4, std::vector<int>(4, 0));
  int perm[4] = {0, 2, 1, 3};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p4b[size_t(perm[i])][size_t(perm[j])] = p4[size_t(i)][size_t(j)];
  CHECK(graph_isomorphic(p4, p4b));

  auto q2 = to_adj(hypercube<GR>(2));  // the 4-cycle
  CHECK_FALSE(graph_isomorphic(p4, q2));
}
