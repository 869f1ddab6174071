#pragma once

// Element-level reference computations used as independent oracles. Nothing
// here goes through Smith or Hermite forms: groups are lists of residue
// vectors and morphisms are evaluated coordinate by coordinate.

#include "fisplit/fisplit.hpp"

#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using fisplit::FgAbGroup;
using fisplit::Int;
using fisplit::IntVector;
using fisplit::Morphism;

inline std::vector<IntVector> elements(const FgAbGroup& g) {
  std::vector<IntVector> out{IntVector(g.size(), 0)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    std::vector<IntVector> next;
    for (long k = 0; k < g.factor(j).get_si(); ++k)
      for (const auto& x : out) {
        IntVector y = x;
        y[j] = k;
        next.push_back(y);
      }
    out = std::move(next);
  }
  return out;
}

inline IntVector normalize(const FgAbGroup& g, IntVector x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (g.factor(i) != 0) {
      x[i] %= g.factor(i);
      if (x[i] < 0) x[i] += g.factor(i);
    }
  return x;
}

inline IntVector eval(const Morphism& f, const IntVector& x) {
  IntVector y(f.cod().size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += f.matrix()(i, j) * x[j];
  return normalize(f.cod(), y);
}

inline IntVector add(const FgAbGroup& g, const IntVector& a, const IntVector& b) {
  IntVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return normalize(g, c);
}

using ElementSet = std::set<IntVector>;

inline ElementSet members(const fisplit::Subgroup& s) {
  ElementSet out;
  for (const auto& x : elements(s.ambient()))
    if (s.contains(x)) out.insert(x);
  return out;
}

/// Closure of a set of elements under addition (finite groups).
inline ElementSet span(const FgAbGroup& g, const std::vector<IntVector>& gens) {
  ElementSet s{IntVector(g.size(), 0)};
  bool grown = true;
  while (grown) {
    grown = false;
    std::vector<IntVector> cur(s.begin(), s.end());
    for (const auto& a : cur)
      for (const auto& b : gens) {
        if (s.insert(add(g, a, normalize(g, b))).second) grown = true;
      }
  }
  return s;
}

inline ElementSet kernel_set(const Morphism& f) {
  ElementSet out;
  for (const auto& x : elements(f.dom()))
    if (eval(f, x) == IntVector(f.cod().size(), 0)) out.insert(x);
  return out;
}

inline ElementSet image_set(const Morphism& f) {
  ElementSet out;
  for (const auto& x : elements(f.dom())) out.insert(eval(f, x));
  return out;
}

inline Int order_of(const FgAbGroup& g) {
  Int n = 1;
  for (const auto& d : g.factors()) n *= d;
  return n;
}

/// Every homomorphism M -> N (finite), listed by generator images y_j with d_j y_j = 0.
inline std::vector<Morphism> all_homs(const FgAbGroup& M, const FgAbGroup& N) {
  auto els = elements(N);
  std::vector<std::vector<IntVector>> choices(M.size());
  for (std::size_t j = 0; j < M.size(); ++j)
    for (const auto& y : els) {
      IntVector z = y;
      for (auto& v : z) v *= M.factor(j);
      if (normalize(N, z) == IntVector(N.size(), 0)) choices[j].push_back(y);
    }
  std::vector<Morphism> out;
  std::vector<std::size_t> idx(M.size(), 0);
  while (true) {
    fisplit::IntMatrix m(N.size(), M.size());
    for (std::size_t j = 0; j < M.size(); ++j)
      for (std::size_t i = 0; i < N.size(); ++i) m(i, j) = choices[j][idx[j]][i];
    out.emplace_back(M, N, m);
    std::size_t t = 0;
    while (t < idx.size()) {
      if (++idx[t] < choices[t].size()) break;
      idx[t] = 0;
      ++t;
    }
    if (t == idx.size()) return out;
  }
}

inline std::size_t hom_count(const FgAbGroup& M, const FgAbGroup& N) {
  std::size_t total = 1;
  auto els = elements(N);
  for (std::size_t j = 0; j < M.size(); ++j) {
    std::size_t c = 0;
    for (const auto& y : els) {
      IntVector z = y;
      for (auto& v : z) v *= M.factor(j);
      if (normalize(N, z) == IntVector(N.size(), 0)) ++c;
    }
    total *= c;
  }
  return total;
}

/// Every subgroup of a small finite group: subsets closed under the operation,
/// grown from all subsets of generators of size <= rank + 1.
inline std::set<ElementSet> all_subgroup_sets(const FgAbGroup& g) {
  std::set<ElementSet> found;
  auto els = elements(g);
  std::function<void(const ElementSet&)> grow = [&](const ElementSet& s) {
    if (!found.insert(s).second) return;
    for (const auto& x : els)
      if (!s.count(x)) {
        std::vector<IntVector> gens(s.begin(), s.end());
        gens.push_back(x);
        grow(span(g, gens));
      }
  };
  grow(ElementSet{IntVector(g.size(), 0)});
  return found;
}

/// A random finite group with order at most `max_order`; trivial about one time in ten.
inline FgAbGroup random_group(std::mt19937& rng, long max_order) {
  if (max_order < 2 || std::uniform_int_distribution<int>(0, 9)(rng) == 0) return FgAbGroup::trivial();
  std::vector<Int> orders;
  long room = max_order;
  int count = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < count && room >= 2; ++i) {
    long o = std::uniform_int_distribution<long>(2, room)(rng);
    orders.push_back(o);
    room /= o;
  }
  return FgAbGroup::from_cyclic_orders(orders);
}

inline Morphism random_morphism(std::mt19937& rng, const FgAbGroup& M, const FgAbGroup& N) {
  auto H = fisplit::hom_basis(M, N);
  std::vector<Int> c(H.rank());
  for (std::size_t t = 0; t < H.rank(); ++t) {
    const Int& o = H.generators[t].order;
    long bound = o == 0 ? 7 : o.get_si();
    c[t] = std::uniform_int_distribution<long>(0, bound - 1)(rng) - (o == 0 ? 3 : 0);
  }
  return H.combine(c);
}

using fisplit::IntMatrix;

// cofactor expansion, deliberately unrelated to the library's elimination
inline Int cofactor_det(const std::vector<std::vector<Int>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Int total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    std::vector<std::vector<Int>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Int> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    Int term = a[0][c] * cofactor_det(minor);
    total += (c % 2 == 0) ? term : Int(-term);
  }
  return total;
}

inline Int det_of(const IntMatrix& m) {
  std::vector<std::vector<Int>> a(m.rows(), std::vector<Int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return cofactor_det(a);
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// d_k = D_k / D_{k-1}, D_k the gcd of all k x k minors
inline std::vector<Int> invariant_factors_by_minors(const IntMatrix& A) {
  std::vector<Int> d;
  Int prev = 1;
  for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    subsets(A.rows(), k, rs);
    subsets(A.cols(), k, cs);
    Int g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) g = gcd(g, det_of(A.select_rows(r).select_cols(c)));
    if (g == 0) {
      for (; k <= std::min(A.rows(), A.cols()); ++k) d.push_back(0);
      break;
    }
    d.push_back(g / prev);
    prev = g;
  }
  return d;
}

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> e(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = e(rng);
  return m;
}

}  // namespace oracle
