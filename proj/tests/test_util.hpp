#pragma once

// Seeded generators shared across the test binaries.  Everything draws from an
// explicit mt19937 so failures replay exactly.

#include <random>
#include <string>
#include <vector>

#include "specred/graphs.hpp"
#include "specred/reduction.hpp"

namespace testutil {

using namespace specred;
using GR = GaussianRational;

inline std::vector<std::string> labels_1n(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

// Small rationals keep exact arithmetic cheap even through determinants.
inline Rat rand_rat(std::mt19937& g, int span = 4) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 3);
  return Rat(num(g), den(g));
}

inline GR rand_gr(std::mt19937& g, bool with_imag = true) {
  if (!with_imag) return GR(rand_rat(g));
  return GR(rand_rat(g), rand_rat(g));
}

inline Mat<GR> rand_mat_gr(std::mt19937& g, int n, bool with_imag = true) {
  Mat<GR> m(n, n);
  for (auto& v : m.a) v = rand_gr(g, with_imag);
  return m;
}

// Hermitian over Q(i): conjugate mirror below the diagonal, real diagonal.
inline Mat<GR> rand_herm_gr(std::mt19937& g, int n) {
  Mat<GR> m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = GR(rand_rat(g));
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = rand_gr(g);
      m(j, i) = m(i, j).conj();
    }
  }
  return m;
}

inline LabeledMatrix<GR> rand_labeled_gr(std::mt19937& g, int n, bool hermitian = false,
                                         const Tolerances& tol = {}) {
  Mat<GR> m = hermitian ? rand_herm_gr(g, n) : rand_mat_gr(g, n);
  return make_labeled(labels_1n(n), std::move(m), tol);
}

inline Mat<Cx> rand_herm_cx(std::mt19937& g, int n, double span = 2.0) {
  std::uniform_real_distribution<double> d(-span, span);
  Mat<Cx> m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = Cx(d(g), 0);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = Cx(d(g), d(g));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline LabeledMatrix<Cx> rand_labeled_herm_cx(std::mt19937& g, int n, double span = 2.0,
                                              const Tolerances& tol = {}) {
  return make_labeled(labels_1n(n), rand_herm_cx(g, n, span), tol);
}

// Loopless 0/1 graph with edge probability p; resampled until it has an edge.
inline LabeledMatrix<GR> rand_graph01(std::mt19937& g, int n, double p = 0.5,
                                      const Tolerances& tol = {}) {
  std::bernoulli_distribution coin(p);
  for (;;) {
    Mat<GR> m(n, n, GR(0));
    int edges = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(g)) {
          m(i, j) = m(j, i) = GR(1);
          ++edges;
        }
    if (edges > 0) return make_labeled(labels_1n(n), std::move(m), tol);
  }
}

// Distinct subset of k labels out of 1..n.
inline std::vector<std::string> rand_subset(std::mt19937& g, int n, int k) {
  std::vector<int> idx(size_t(n));
  for (int i = 0; i < n; ++i) idx[size_t(i)] = i + 1;
  std::shuffle(idx.begin(), idx.end(), g);
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(std::to_string(idx[size_t(i)]));
  return out;
}

inline double mat_dev(const Mat<Cx>& a, const Mat<Cx>& b) {
  double worst = 0;
  for (size_t k = 0; k < a.a.size(); ++k) worst = std::max(worst, std::abs(a.a[k] - b.a[k]));
  return worst;
}

}  // namespace testutil
