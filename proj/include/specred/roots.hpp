#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specred/poly.hpp"

namespace specred {

// All complex roots with multiplicity (as repeats).  Scaled companion matrix,
// balanced, then a few guarded Newton steps against the original polynomial.
std::vector<Cx> poly_roots(const Polynomial<Cx>& p);

// Chain-cluster points within delta; returns (centroid, count) per cluster,
// sorted by (re, im) of the centroid.
std::vector<std::pair<Cx, int>> cluster_points(const std::vector<Cx>& pts, double delta);

// Exact square root in Q(i) when one exists.
std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z);

// Exact roots over Q(i), with multiplicity.  Strips x^k, uses the linear and
// quadratic closed forms, and searches rational and pure-imaginary rational
// candidates (rational root theorem applied to real/imaginary parts).  Throws
// IllConditionedRoots when the polynomial does not split this way.
std::vector<GaussianRational> poly_roots_exact(const Polynomial<GaussianRational>& p);

}  // namespace specred
