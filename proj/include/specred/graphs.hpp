#pragma once

#include <array>
#include <queue>
#include <string>
#include <vector>

#include "specred/iso.hpp"
#include "specred/reduction.hpp"
#include "specred/roots.hpp"

namespace specred {

// --- constructors -----------------------------------------------------------

template <class F>
LabeledMatrix<F> path(int n, const Tolerances& tol = {}) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "path needs at least one vertex");
  Mat<F> a(n, n, FieldTraits<F>::zero());
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = FieldTraits<F>::one();
    a(i + 1, i) = FieldTraits<F>::one();
  }
  return make_labeled(std::move(labels), std::move(a), tol);
}

// Vertex labels of G x H concatenate the factor labels, so iterating the
// product of 2-paths labeled "0"/"1" yields hypercube bit strings.
template <class F>
LabeledMatrix<F> cartesian_product(const LabeledMatrix<F>& g, const LabeledMatrix<F>& h,
                                   const Tolerances& tol = {}) {
  const int ng = g.entries.rows, nh = h.entries.rows;
  Mat<F> a(ng * nh, ng * nh, FieldTraits<F>::zero());
  std::vector<std::string> labels;
  for (int i = 0; i < ng; ++i)
    for (int j = 0; j < nh; ++j) labels.push_back(g.labels[size_t(i)] + h.labels[size_t(j)]);
  auto id = [&](int i, int j) { return i * nh + j; };
  for (int i = 0; i < ng; ++i)
    for (int j = 0; j < nh; ++j) {
      for (int i2 = 0; i2 < ng; ++i2)
        if (!FieldTraits<F>::is_zero(g.entries(i, i2)))
          a(id(i, j), id(i2, j)) = g.entries(i, i2);
      for (int j2 = 0; j2 < nh; ++j2)
        if (!FieldTraits<F>::is_zero(h.entries(j, j2)))
          a(id(i, j), id(i, j2)) = h.entries(j, j2);
    }
  return make_labeled(std::move(labels), std::move(a), tol);
}

template <class F>
LabeledMatrix<F> hypercube(int n, const Tolerances& tol = {}) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "hypercube needs n >= 1");
  Mat<F> p2(2, 2, FieldTraits<F>::zero());
  p2(0, 1) = FieldTraits<F>::one();
  p2(1, 0) = FieldTraits<F>::one();
  LabeledMatrix<F> q = make_labeled({"0", "1"}, p2, tol);
  for (int k = 1; k < n; ++k) {
    Mat<F> e2 = p2;
    q = cartesian_product(q, make_labeled({"0", "1"}, e2, tol), tol);
  }
  return q;
}

// --- equitable partitions ---------------------------------------------------

struct VertexPartition {
  std::vector<std::vector<std::string>> classes;
};

template <class F>
std::vector<std::vector<int>> partition_indices(const LabeledMatrix<F>& a,
                                                const VertexPartition& pi) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(size_t(a.entries.rows), false);
  for (const auto& cls : pi.classes) {
    if (cls.empty()) throw Error(ErrorCode::DimensionMismatch, "empty partition class");
    std::vector<int> idx = subset_indices(a, cls);
    for (int i : idx) {
      if (seen[size_t(i)])
        throw Error(ErrorCode::UnknownLabel,
                    "label '" + a.labels[size_t(i)] + "' appears in two classes");
      seen[size_t(i)] = true;
    }
    out.push_back(std::move(idx));
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw Error(ErrorCode::DimensionMismatch,
                  "partition does not cover vertex '" + a.labels[i] + "'");
  return out;
}

template <class F>
struct EquitableResult {
  bool equitable = false;
  Mat<F> divisor;  // row-sum constants c_{i,j}, valid when equitable
  // witness when not equitable:
  int block_row = -1, block_col = -1;
  std::string vertex_u, vertex_v;
  F sum_u = FieldTraits<F>::zero(), sum_v = FieldTraits<F>::zero();
};

template <class F>
EquitableResult<F> is_equitable(const LabeledMatrix<F>& a, const VertexPartition& pi,
                                const Tolerances& tol = {}) {
  auto classes = partition_indices(a, pi);
  const int k = int(classes.size());
  EquitableResult<F> out;
  out.divisor = Mat<F>(k, k, FieldTraits<F>::zero());
  for (int ci = 0; ci < k; ++ci)
    for (int cj = 0; cj < k; ++cj) {
      F first = FieldTraits<F>::zero();
      for (size_t t = 0; t < classes[size_t(ci)].size(); ++t) {
        int u = classes[size_t(ci)][t];
        F sum = FieldTraits<F>::zero();
        for (int w : classes[size_t(cj)]) sum = sum + a.entries(u, w);
        if (t == 0) {
          first = sum;
        } else {
          F d = sum - first;
          bool differs = FieldTraits<F>::exact
                             ? !FieldTraits<F>::is_zero(d)
                             : FieldTraits<F>::abs_approx(d) > tol.eps;
          if (differs) {
            out.equitable = false;
            out.block_row = ci;
            out.block_col = cj;
            out.vertex_u = a.labels[size_t(classes[size_t(ci)][0])];
            out.vertex_v = a.labels[size_t(u)];
            out.sum_u = first;
            out.sum_v = sum;
            return out;
          }
        }
      }
      out.divisor(ci, cj) = first;
    }
  out.equitable = true;
  return out;
}

namespace detail {
// 1/sqrt(m) in the field; the exact backend refuses non-square class sizes.
template <class F>
F inv_sqrt_int(int m) {
  if constexpr (FieldTraits<F>::exact) {
    auto s = gaussian_sqrt(GaussianRational(Rat(1, m)));
    if (!s || !s->is_real())
      throw Error(ErrorCode::IllConditionedRoots,
                  "class size " + std::to_string(m) + " has no exact inverse square root");
    return *s;
  } else {
    return F(1.0 / std::sqrt(double(m)));
  }
}
}  // namespace detail

// Class indicator with columns scaled to unit norm (an orthonormal frame).
template <class F>
Mat<F> normalized_indicator(const LabeledMatrix<F>& a, const VertexPartition& pi) {
  auto classes = partition_indices(a, pi);
  Mat<F> p(a.entries.rows, int(classes.size()), FieldTraits<F>::zero());
  for (size_t j = 0; j < classes.size(); ++j) {
    F v = detail::inv_sqrt_int<F>(int(classes[j].size()));
    for (int i : classes[j]) p(i, int(j)) = v;
  }
  return p;
}

template <class F>
Mat<F> symmetrized_divisor(const LabeledMatrix<F>& a, const VertexPartition& pi,
                           const Tolerances& tol = {}) {
  auto eq = is_equitable(a, pi, tol);
  if (!eq.equitable)
    throw Error(ErrorCode::NotEquitable,
                "partition is not equitable: vertices '" + eq.vertex_u + "' and '" +
                    eq.vertex_v + "' differ on block (" + std::to_string(eq.block_row) + "," +
                    std::to_string(eq.block_col) + ")");
  Mat<F> p = normalized_indicator(a, pi);
  return mat_mul(mat_mul(mat_conj_transpose(p), a.entries), p);
}

// d = R(lambda, P, A): the frame reduction by the normalized indicator is
// lambda-independent and equals the symmetrized divisor.
template <class F>
bool divisor_is_reduction_check(const LabeledMatrix<F>& a, const VertexPartition& pi,
                                const Tolerances& tol = {}) {
  Mat<F> d = symmetrized_divisor(a, pi, tol);  // throws NotEquitable
  Mat<F> p = normalized_indicator(a, pi);
  RatMatrix<F> r = reduce_frame(a, p, tol);
  if constexpr (FieldTraits<F>::exact) {
    return r == rm_from_scalar(d);
  } else {
    RatMatrix<F> dd = rm_from_scalar(d);
    return rm_sampled_equal(r, dd, tol, 12345, 10).equal;
  }
}

template <class F>
VertexPartition distance_partition(const LabeledMatrix<F>& a, const std::string& v) {
  std::vector<int> start = subset_indices(a, {v});
  const int n = a.entries.rows;
  std::vector<int> dist(size_t(n), -1);
  std::queue<int> q;
  dist[size_t(start[0])] = 0;
  q.push(start[0]);
  int maxd = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w = 0; w < n; ++w) {
      if (w == u || FieldTraits<F>::is_zero(a.entries(u, w))) continue;
      if (dist[size_t(w)] < 0) {
        dist[size_t(w)] = dist[size_t(u)] + 1;
        maxd = std::max(maxd, dist[size_t(w)]);
        q.push(w);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (dist[size_t(i)] < 0)
      throw Error(ErrorCode::DisconnectedGraph,
                  "vertex '" + a.labels[size_t(i)] + "' is unreachable from '" + v + "'");
  VertexPartition pi;
  pi.classes.assign(size_t(maxd) + 1, {});
  for (int i = 0; i < n; ++i) pi.classes[size_t(dist[size_t(i)])].push_back(a.labels[size_t(i)]);
  return pi;
}

// --- the 16-vertex hypercube-variant family ---------------------------------

struct BlockPattern {
  std::array<std::array<int, 6>, 4> bits{};
};

inline void validate_pattern(const BlockPattern& b) {
  for (int i = 0; i < 4; ++i) {
    int rs = 0;
    for (int j = 0; j < 6; ++j) {
      if (b.bits[size_t(i)][size_t(j)] != 0 && b.bits[size_t(i)][size_t(j)] != 1)
        throw Error(ErrorCode::InvalidPattern, "pattern entries must be 0 or 1");
      rs += b.bits[size_t(i)][size_t(j)];
    }
    if (rs != 3)
      throw Error(ErrorCode::InvalidPattern, "pattern row " + std::to_string(i) + " must sum to 3");
  }
  for (int j = 0; j < 6; ++j) {
    int cs = 0;
    for (int i = 0; i < 4; ++i) cs += b.bits[size_t(i)][size_t(j)];
    if (cs != 2)
      throw Error(ErrorCode::InvalidPattern, "pattern column " + std::to_string(j) + " must sum to 2");
  }
}

// The pattern read off the displayed 16x16 matrix.
inline BlockPattern paper_block_pattern() {
  BlockPattern b;
  const int rows[4][6] = {{1, 1, 1, 0, 0, 0},
                          {0, 0, 0, 1, 1, 1},
                          {1, 1, 0, 1, 0, 0},
                          {0, 0, 1, 0, 1, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) b.bits[size_t(i)][size_t(j)] = rows[i][j];
  return b;
}

// Q4's tridiagonal distance divisor: d_{k,k+1} = n-k, d_{k,k-1} = k.
template <class F>
Mat<F> hypercube_distance_divisor(int n) {
  Mat<F> d(n + 1, n + 1, FieldTraits<F>::zero());
  for (int k = 0; k < n; ++k) {
    d(k, k + 1) = FieldTraits<F>::from_int(n - k);
    d(k + 1, k) = FieldTraits<F>::from_int(k + 1);
  }
  return d;
}

// Assemble the 16-vertex template: endpoint a, 4-class, 6-class, 4-class,
// endpoint b, with the same 4x6 pattern bridging (class1, class2) and
// (class3, class2).  Validates the distance partition and divisor before
// returning.
template <class F>
LabeledMatrix<F> q4_variant(const BlockPattern& b, const Tolerances& tol = {}) {
  validate_pattern(b);
  Mat<F> a(16, 16, FieldTraits<F>::zero());
  auto set = [&](int i, int j) {
    a(i, j) = FieldTraits<F>::one();
    a(j, i) = FieldTraits<F>::one();
  };
  for (int i = 0; i < 4; ++i) set(0, 1 + i);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j)
      if (b.bits[size_t(i)][size_t(j)]) {
        set(1 + i, 5 + j);    // class1 - class2
        set(11 + i, 5 + j);   // class3 - class2, same pattern
      }
  for (int i = 0; i < 4; ++i) set(11 + i, 15);
  std::vector<std::string> labels;
  for (int i = 1; i <= 16; ++i) labels.push_back(std::to_string(i));
  LabeledMatrix<F> g = make_labeled(std::move(labels), std::move(a), tol);

  VertexPartition pi = distance_partition(g, "1");
  auto eq = is_equitable(g, pi, tol);
  if (!eq.equitable)
    throw Error(ErrorCode::DivisorMismatch, "distance partition from vertex 1 is not equitable");
  Mat<F> want = hypercube_distance_divisor<F>(4);
  if (eq.divisor.rows != want.rows || mat_max_abs_diff(eq.divisor, want) > 0)
    throw Error(ErrorCode::DivisorMismatch, "divisor differs from the 4-hypercube's");
  return g;
}

namespace detail {
template <class F>
std::vector<std::vector<int>> to_adjacency(const LabeledMatrix<F>& g) {
  const int n = g.entries.rows;
  std::vector<std::vector<int>> a(size_t(n), std::vector<int>(size_t(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[size_t(i)][size_t(j)] = FieldTraits<F>::is_zero(g.entries(i, j)) ? 0 : 1;
  return a;
}

// Q4 with vertices reordered by (distance from 0000, binary value) so it fits
// the same 1..16 labeling and endpoint pair as the pattern-built variants.
template <class F>
LabeledMatrix<F> q4_in_template_order(const Tolerances& tol = {}) {
  LabeledMatrix<F> q = hypercube<F>(4, tol);
  std::vector<int> order;
  for (int w = 0; w <= 4; ++w)
    for (int v = 0; v < 16; ++v)
      if (__builtin_popcount(unsigned(v)) == w) order.push_back(v);
  // hypercube labels are bit strings; map label -> index first
  std::vector<int> byval(16, 0);
  for (int i = 0; i < 16; ++i) {
    int val = 0;
    for (char c : q.labels[size_t(i)]) val = val * 2 + (c == '1');
    byval[size_t(val)] = i;
  }
  Mat<F> a(16, 16, FieldTraits<F>::zero());
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      a(i, j) = q.entries(byval[size_t(order[size_t(i)])], byval[size_t(order[size_t(j)])]);
  std::vector<std::string> labels;
  for (int i = 1; i <= 16; ++i) labels.push_back(std::to_string(i));
  return make_labeled(std::move(labels), std::move(a), tol);
}
}  // namespace detail

// Distinct valid 16-vertex graphs with Q4's distance divisor, up to
// isomorphism: the hypercube itself first, then pattern-built variants in
// lexicographic pattern order.
template <class F>
std::vector<LabeledMatrix<F>> enumerate_q4_variants(int limit, const Tolerances& tol = {}) {
  std::vector<LabeledMatrix<F>> out;
  if (limit <= 0) return out;
  out.push_back(detail::q4_in_template_order<F>(tol));
  if (int(out.size()) >= limit) return out;
  std::vector<std::vector<std::vector<int>>> kept_adj;
  kept_adj.push_back(detail::to_adjacency(out[0]));

  // Column-wise odometer: each column picks 2 of 4 rows, in lexicographic
  // order of the 15 pair choices.
  std::array<std::pair<int, int>, 6> pairs{};
  std::vector<std::pair<int, int>> choices;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) choices.push_back({i, j});
  std::array<int, 6> pick{};
  for (;;) {
    BlockPattern b;
    std::array<int, 4> rowsum{};
    for (int c = 0; c < 6; ++c) {
      pairs[size_t(c)] = choices[size_t(pick[size_t(c)])];
      b.bits[size_t(pairs[size_t(c)].first)][size_t(c)] = 1;
      b.bits[size_t(pairs[size_t(c)].second)][size_t(c)] = 1;
      ++rowsum[size_t(pairs[size_t(c)].first)];
      ++rowsum[size_t(pairs[size_t(c)].second)];
    }
    if (rowsum == std::array<int, 4>{3, 3, 3, 3}) {
      bool valid = true;
      LabeledMatrix<F> g;
      try {
        g = q4_variant<F>(b, tol);
      } catch (const Error&) {
        valid = false;
      }
      if (valid) {
        auto adj = detail::to_adjacency(g);
        bool fresh = true;
        for (const auto& k : kept_adj)
          if (graph_isomorphic(adj, k)) { fresh = false; break; }
        if (fresh) {
          out.push_back(std::move(g));
          kept_adj.push_back(std::move(adj));
          if (int(out.size()) >= limit) return out;
        }
      }
    }
    int c = 5;
    while (c >= 0 && ++pick[size_t(c)] == int(choices.size())) {
      pick[size_t(c)] = 0;
      --c;
    }
    if (c < 0) break;
  }
  return out;
}

}  // namespace specred
