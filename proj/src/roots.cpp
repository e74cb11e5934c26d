#include "specred/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace specred {

namespace {

using boost::multiprecision::cpp_int;

// Parlett–Reinsch balancing with power-of-two factors (exact in binary fp).
void balance(Eigen::MatrixXcd& m) {
  const int n = int(m.rows());
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 50) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      double r = 0, col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (r == 0 || col == 0) continue;
      double f = 1, s0 = r + col;
      while (col < r / 2) { col *= 2; r /= 2; f *= 2; }
      while (col >= r * 2) { col /= 2; r *= 2; f /= 2; }
      if (col + r < 0.95 * s0 && f != 1) {
        changed = true;
        for (int j = 0; j < n; ++j) m(i, j) /= f;
        for (int j = 0; j < n; ++j) m(j, i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<Cx> poly_roots(const Polynomial<Cx>& p) {
  std::vector<Cx> c = p.c;
  while (!c.empty() && c.back() == Cx(0)) c.pop_back();
  std::vector<Cx> roots;
  if (c.size() <= 1) return roots;
  size_t lo = 0;
  while (lo + 1 < c.size() && c[lo] == Cx(0)) {
    roots.push_back(0);
    ++lo;
  }
  c.erase(c.begin(), c.begin() + long(lo));
  const int n = int(c.size()) - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  // Variable scaling x = s*y keeps companion entries O(1).
  double s = 0;
  for (int k = 0; k < n; ++k) {
    double a = std::abs(c[k] / c[n]);
    if (a > 0) s = std::max(s, std::pow(a, 1.0 / (n - k)));
  }
  if (s == 0) s = 1;

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  double sp = 1;  // s^(n-k) accumulated from the top
  std::vector<double> spow(n + 1);
  spow[n] = 1;
  for (int k = n - 1; k >= 0; --k) {
    sp *= s;
    spow[k] = sp;
  }
  for (int k = 0; k < n; ++k) comp(k, n - 1) = -(c[k] / c[n]) / spow[k];
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1;
  balance(comp);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (int k = 0; k < n; ++k) {
    Cx x = es.eigenvalues()[k] * s;
    // Guarded Newton polish against the original coefficients.
    for (int it = 0; it < 3; ++it) {
      Cx f = p.eval_cx(x), df = p.derivative().eval_cx(x);
      if (std::abs(df) < 1e-300) break;
      Cx xn = x - f / df;
      if (std::abs(p.eval_cx(xn)) <= std::abs(f)) x = xn; else break;
    }
    roots.push_back(x);
  }
  return roots;
}

std::vector<std::pair<Cx, int>> cluster_points(const std::vector<Cx>& pts, double delta) {
  const int n = int(pts.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= delta) parent[find(i)] = find(j);
  std::map<int, std::pair<Cx, int>> acc;
  for (int i = 0; i < n; ++i) {
    auto& [sum, cnt] = acc[find(i)];
    sum += pts[i];
    ++cnt;
  }
  std::vector<std::pair<Cx, int>> out;
  for (auto& [root, sc] : acc) out.push_back({sc.first / double(sc.second), sc.second});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return out;
}

namespace {

std::optional<Rat> rational_sqrt(const Rat& r) {
  if (r < 0) return std::nullopt;
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  cpp_int sn = boost::multiprecision::sqrt(num);
  cpp_int sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rat(sn, sd);
}

std::vector<cpp_int> divisors(cpp_int n) {
  if (n < 0) n = -n;
  std::vector<cpp_int> out;
  if (n == 0 || n > cpp_int(1000000000000LL)) return out;  // caller falls back
  for (cpp_int d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      out.push_back(n / d);
    }
  return out;
}

// Rational candidates p/s from the rational root theorem on the integer
// coefficient vector g (ascending), ignoring bottom zeros.
std::vector<Rat> rrt_candidates(const std::vector<cpp_int>& g) {
  size_t lo = 0, hi = g.size();
  while (lo < g.size() && g[lo] == 0) ++lo;
  while (hi > lo && g[hi - 1] == 0) --hi;
  if (lo >= hi) return {};
  auto ps = divisors(g[lo]);
  auto qs = divisors(g[hi - 1]);
  std::set<Rat> cand;
  for (const auto& p : ps)
    for (const auto& q : qs) {
      cand.insert(Rat(p, q));
      cand.insert(Rat(-p, q));
    }
  return {cand.begin(), cand.end()};
}

using GPoly = Polynomial<GaussianRational>;

std::optional<GaussianRational> find_rational_like_root(const GPoly& p) {
  // Clear denominators.
  cpp_int L = 1;
  for (const auto& a : p.c) {
    L = boost::multiprecision::lcm(L, boost::multiprecision::denominator(a.re));
    L = boost::multiprecision::lcm(L, boost::multiprecision::denominator(a.im));
  }
  std::vector<cpp_int> u, v;
  for (const auto& a : p.c) {
    u.push_back(boost::multiprecision::numerator(a.re * Rat(L)));
    v.push_back(boost::multiprecision::numerator(a.im * Rat(L)));
  }
  auto any_nonzero = [](const std::vector<cpp_int>& g) {
    for (const auto& x : g) if (x != 0) return true;
    return false;
  };
  // Real rational candidates must be roots of both the real and imaginary
  // integer polynomials; take candidates from one nonzero part, verify on p.
  const std::vector<cpp_int>& g = any_nonzero(u) ? u : v;
  for (const Rat& r : rrt_candidates(g)) {
    GaussianRational x(r);
    if (p.eval(x).is_zero()) return x;
  }
  // Pure imaginary x = i*y: substitute and reuse the machinery.
  std::vector<cpp_int> u2(u.size()), v2(v.size());
  for (size_t k = 0; k < u.size(); ++k) {
    switch (k % 4) {  // (u + iv) * i^k
      case 0: u2[k] = u[k]; v2[k] = v[k]; break;
      case 1: u2[k] = -v[k]; v2[k] = u[k]; break;
      case 2: u2[k] = -u[k]; v2[k] = -v[k]; break;
      case 3: u2[k] = v[k]; v2[k] = -u[k]; break;
    }
  }
  const std::vector<cpp_int>& g2 = any_nonzero(u2) ? u2 : v2;
  for (const Rat& r : rrt_candidates(g2)) {
    GaussianRational x(Rat(0), r);
    if (p.eval(x).is_zero()) return x;
  }
  return std::nullopt;
}

}  // namespace

std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z) {
  if (z.is_zero()) return GaussianRational(0);
  if (z.im == 0) {
    if (z.re > 0) {
      if (auto s = rational_sqrt(z.re)) return GaussianRational(*s);
      return std::nullopt;
    }
    if (auto s = rational_sqrt(-z.re)) return GaussianRational(Rat(0), *s);
    return std::nullopt;
  }
  auto n = rational_sqrt(z.norm());
  if (!n) return std::nullopt;
  auto x2 = rational_sqrt((z.re + *n) / 2);
  if (!x2 || *x2 == 0) return std::nullopt;
  Rat y = z.im / (2 * *x2);
  GaussianRational w(*x2, y);
  return (w * w == z) ? std::optional<GaussianRational>(w) : std::nullopt;
}

std::vector<GaussianRational> poly_roots_exact(const Polynomial<GaussianRational>& p0) {
  GPoly p = p0;
  p.trim();
  if (p.is_zero())
    throw Error(ErrorCode::IllConditionedRoots, "root finding on the zero polynomial");
  std::vector<GaussianRational> roots;
  size_t lo = 0;
  while (lo + 1 < p.c.size() && p.c[lo].is_zero()) {
    roots.push_back(GaussianRational(0));
    ++lo;
  }
  p.c.erase(p.c.begin(), p.c.begin() + long(lo));

  while (p.deg() >= 1) {
    GaussianRational r;
    if (p.deg() == 1) {
      r = -p.c[0] / p.c[1];
    } else if (p.deg() == 2) {
      GaussianRational a = p.c[2], b = p.c[1], cc = p.c[0];
      auto sq = gaussian_sqrt(b * b - GaussianRational(4) * a * cc);
      if (!sq)
        throw Error(ErrorCode::IllConditionedRoots,
                    "quadratic does not split over Q(i)");
      GaussianRational two_a = GaussianRational(2) * a;
      roots.push_back((-b + *sq) / two_a);
      roots.push_back((-b - *sq) / two_a);
      break;
    } else {
      auto found = find_rational_like_root(p);
      if (!found)
        throw Error(ErrorCode::IllConditionedRoots,
                    "no rational or pure-imaginary rational root found");
      r = *found;
    }
    roots.push_back(r);
    auto [q, rem] = poly_divmod(p, GPoly(std::vector<GaussianRational>{-r, GaussianRational(1)}));
    if (!rem.is_zero())
      throw Error(ErrorCode::IllConditionedRoots, "deflation left a nonzero remainder");
    p = q;
  }
  return roots;
}

}  // namespace specred
