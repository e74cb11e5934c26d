#include "specred/iso.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace specred {

namespace {

using Adj = std::vector<std::vector<int>>;

// 1-dimensional color refinement to a stable partition; returns final colors.
std::vector<int> refine(const Adj& g) {
  const int n = int(g.size());
  std::vector<int> color(size_t(n), 0);
  for (int v = 0; v < n; ++v)
    color[size_t(v)] = int(std::accumulate(g[size_t(v)].begin(), g[size_t(v)].end(), 0));
  for (int round = 0; round < n; ++round) {
    // signature = (own color, sorted neighbor colors)
    std::vector<std::pair<std::vector<int>, int>> sig{size_t(n)};
    for (int v = 0; v < n; ++v) {
      std::vector<int> nb;
      for (int u = 0; u < n; ++u)
        if (g[size_t(v)][size_t(u)]) nb.push_back(color[size_t(u)]);
      std::sort(nb.begin(), nb.end());
      nb.push_back(color[size_t(v)]);
      sig[size_t(v)] = {std::move(nb), v};
    }
    std::map<std::vector<int>, int> remap;
    std::vector<int> next(size_t(n), 0);
    for (int v = 0; v < n; ++v) {
      auto it = remap.find(sig[size_t(v)].first);
      if (it == remap.end()) it = remap.insert({sig[size_t(v)].first, int(remap.size())}).first;
      next[size_t(v)] = it->second;
    }
    if (next == color) break;
    color = next;
  }
  return color;
}

struct Matcher {
  const Adj& a;
  const Adj& b;
  int n;
  std::vector<std::vector<char>> allowed;  // allowed[v in a][u in b]
  std::vector<int> map_ab;                 // a-vertex -> b-vertex or -1
  std::vector<char> used_b;

  bool extend(int depth, const std::vector<int>& order) {
    if (depth == n) return true;
    int v = order[size_t(depth)];
    for (int u = 0; u < n; ++u) {
      if (!allowed[size_t(v)][size_t(u)] || used_b[size_t(u)]) continue;
      bool ok = true;
      for (int w = 0; w < n; ++w) {
        int mw = map_ab[size_t(w)];
        if (mw < 0) continue;
        if (a[size_t(v)][size_t(w)] != b[size_t(u)][size_t(mw)]) { ok = false; break; }
      }
      if (!ok) continue;
      map_ab[size_t(v)] = u;
      used_b[size_t(u)] = 1;
      if (extend(depth + 1, order)) return true;
      map_ab[size_t(v)] = -1;
      used_b[size_t(u)] = 0;
    }
    return false;
  }
};

}  // namespace

bool graph_isomorphic(const Adj& a, const Adj& b) {
  const int n = int(a.size());
  if (int(b.size()) != n) return false;
  std::vector<int> ca = refine(a), cb = refine(b);
  // Refinement colors are built from identical signature maps only within one
  // graph; compare class-size histograms through a canonical signature:
  // recompute jointly so color ids are shared.
  {
    // Joint refinement: run refinement on the disjoint union and require the
    // two halves to realize the same color multiset.
    Adj u(size_t(2 * n), std::vector<int>(size_t(2 * n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        u[size_t(i)][size_t(j)] = a[size_t(i)][size_t(j)];
        u[size_t(n + i)][size_t(n + j)] = b[size_t(i)][size_t(j)];
      }
    std::vector<int> cu = refine(u);
    ca.assign(cu.begin(), cu.begin() + n);
    cb.assign(cu.begin() + n, cu.end());
    std::vector<int> ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return false;
  }

  Matcher m{a, b, n, {}, std::vector<int>(size_t(n), -1), std::vector<char>(size_t(n), 0)};
  m.allowed.assign(size_t(n), std::vector<char>(size_t(n), 0));
  std::vector<int> cand_count(size_t(n), 0);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (ca[size_t(v)] == cb[size_t(u)]) {
        m.allowed[size_t(v)][size_t(u)] = 1;
        ++cand_count[size_t(v)];
      }
  // Most-constrained-first, then prefer vertices adjacent to earlier ones.
  std::vector<int> order(size_t(n), 0);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (cand_count[size_t(x)] != cand_count[size_t(y)]) return cand_count[size_t(x)] < cand_count[size_t(y)];
    return x < y;
  });
  std::vector<int> final_order;
  std::vector<char> placed(size_t(n), 0);
  while (int(final_order.size()) < n) {
    int pick = -1;
    for (int v : order) {
      if (placed[size_t(v)]) continue;
      bool touches = final_order.empty();
      for (int w : final_order)
        if (a[size_t(v)][size_t(w)]) { touches = true; break; }
      if (touches) { pick = v; break; }
    }
    if (pick < 0)
      for (int v : order)
        if (!placed[size_t(v)]) { pick = v; break; }
    placed[size_t(pick)] = 1;
    final_order.push_back(pick);
  }
  return m.extend(0, final_order);
}

}  // namespace specred
