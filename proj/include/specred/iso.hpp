#pragma once

#include <vector>

namespace specred {

// Exact isomorphism test for small simple graphs (0/1 symmetric adjacency).
// Color refinement prunes the candidate sets, then complete backtracking
// decides.
bool graph_isomorphic(const std::vector<std::vector<int>>& a,
                      const std::vector<std::vector<int>>& b);

}  // namespace specred
