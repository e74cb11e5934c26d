#pragma once

#include <string>
#include <vector>

#include "specred/mat.hpp"

namespace specred {

// Square scalar matrix with distinct vertex labels; the hermitian flag is
// cached at construction.
template <class F>
struct LabeledMatrix {
  std::vector<std::string> labels;
  Mat<F> entries;
  bool hermitian = false;
};

template <class F>
LabeledMatrix<F> make_labeled(std::vector<std::string> labels, Mat<F> entries,
                              const Tolerances& tol = {}) {
  if (entries.rows != entries.cols || int(labels.size()) != entries.rows)
    throw Error(ErrorCode::DimensionMismatch, "labels must match a square matrix");
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        throw Error(ErrorCode::UnknownLabel, "duplicate vertex label '" + labels[i] + "'");
  LabeledMatrix<F> m{std::move(labels), std::move(entries), false};
  m.hermitian = mat_is_hermitian(m.entries, tol.eps);
  return m;
}

// Default labels "0","1",... for matrices built from raw data.
template <class F>
LabeledMatrix<F> make_labeled(Mat<F> entries, const Tolerances& tol = {}) {
  std::vector<std::string> labels;
  for (int i = 0; i < entries.rows; ++i) labels.push_back(std::to_string(i));
  return make_labeled(std::move(labels), std::move(entries), tol);
}

template <class F>
LabeledMatrix<Cx> lm_to_cx(const LabeledMatrix<F>& m) {
  Mat<Cx> e(m.entries.rows, m.entries.cols);
  for (size_t k = 0; k < m.entries.a.size(); ++k)
    e.a[k] = FieldTraits<F>::to_complex(m.entries.a[k]);
  return {m.labels, std::move(e), m.hermitian};
}

// Either an ordered vertex subset or a frame with orthonormal columns.
template <class F>
struct Selector {
  std::vector<std::string> subset;
  Mat<F> frame;  // used iff frame.cols > 0

  bool is_frame() const { return frame.cols > 0; }
  static Selector of_subset(std::vector<std::string> s) { return {std::move(s), {}}; }
  static Selector of_frame(Mat<F> f) { return {{}, std::move(f)}; }
};

// Resolve subset labels to row indices; enforces nonempty, known, distinct.
template <class F>
std::vector<int> subset_indices(const LabeledMatrix<F>& a, const std::vector<std::string>& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySubset, "subset selector is empty");
  std::vector<int> idx;
  for (const std::string& lab : s) {
    int found = -1;
    for (size_t i = 0; i < a.labels.size(); ++i)
      if (a.labels[i] == lab) { found = int(i); break; }
    if (found < 0) throw Error(ErrorCode::UnknownLabel, "unknown vertex label '" + lab + "'");
    for (int prev : idx)
      if (prev == found)
        throw Error(ErrorCode::UnknownLabel, "vertex label '" + lab + "' repeated in subset");
    idx.push_back(found);
  }
  return idx;
}

inline std::vector<int> complement_indices(int n, const std::vector<int>& s) {
  std::vector<bool> in(size_t(n), false);
  for (int i : s) in[size_t(i)] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[size_t(i)]) out.push_back(i);
  return out;
}

}  // namespace specred
