#pragma once

// Slow reference implementations written directly from the definitions,
// sharing no code with the library beyond the Orgraph container.

#include "flagcert/flag.hpp"
#include "flagcert/orgraph.hpp"
#include "flagcert/rational.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using flagcert::Integer;
using flagcert::Orgraph;
using flagcert::Rational;

using Adj = std::vector<std::vector<int>>;  // adj[u][v] = 1 iff u -> v

inline Adj adjacency(const Orgraph& g) {
  Adj a(g.order(), std::vector<int>(g.order(), 0));
  for (int u = 0; u < g.order(); ++u)
    for (int v = 0; v < g.order(); ++v) a[u][v] = g.has_arc(u, v) ? 1 : 0;
  return a;
}

// Text key of `a` with vertices listed in `order`.
inline std::string key(const Adj& a, const std::vector<int>& order) {
  std::string s;
  for (int u : order)
    for (int v : order) s += static_cast<char>('0' + a[u][v]);
  return s;
}

// Smallest key over all vertex orders whose first `fixed` entries are 0..fixed-1.
inline std::string canonical_key(const Adj& a, int fixed = 0) {
  const int n = static_cast<int>(a.size());
  std::vector<int> tail(n - fixed);
  std::iota(tail.begin(), tail.end(), fixed);
  std::string best;
  bool first = true;
  do {
    std::vector<int> order(fixed);
    std::iota(order.begin(), order.end(), 0);
    order.insert(order.end(), tail.begin(), tail.end());
    std::string k = key(a, order);
    if (first || k < best) best = k, first = false;
  } while (std::next_permutation(tail.begin(), tail.end()));
  return best;
}

// Number of isomorphism classes of orgraphs on n vertices by brute force.
inline std::size_t count_classes(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::size_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;
  std::set<std::string> classes;
  for (std::size_t code = 0; code < total; ++code) {
    Adj a(n, std::vector<int>(n, 0));
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      const int d = static_cast<int>(c % 3);
      c /= 3;
      if (d == 1) a[i][j] = 1;
      if (d == 2) a[j][i] = 1;
    }
    classes.insert(canonical_key(a));
  }
  return classes.size();
}

inline Adj induced(const Adj& a, const std::vector<int>& vs) {
  Adj b(vs.size(), std::vector<int>(vs.size(), 0));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) b[i][j] = a[vs[i]][vs[j]];
  return b;
}

// Induced density of target in host over all |target|-subsets.
inline Rational density(const Orgraph& target, const Orgraph& host) {
  const Adj h = adjacency(host);
  const std::string t = canonical_key(adjacency(target));
  const int k = target.order();
  const int n = host.order();
  Integer hits = 0, total = 0;
  std::vector<int> mask(n, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  do {
    std::vector<int> vs;
    for (int i = 0; i < n; ++i)
      if (mask[i]) vs.push_back(i);
    ++total;
    if (canonical_key(induced(h, vs)) == t) ++hits;
  } while (std::next_permutation(mask.begin(), mask.end()));
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

// Key of a flag: labels are vertices 0..k-1 of its graph, kept in place.
inline std::string flag_key(const flagcert::Flag& f) { return canonical_key(adjacency(f.graph()), f.type_order()); }

// p(f1, f2; f) from the definition: ordered pairs of disjoint petals drawn from
// the unlabelled vertices of f, compared as labelled graphs up to relabelling
// of the petal vertices.
inline Rational sunflower(const flagcert::Flag& f1, const flagcert::Flag& f2, const flagcert::Flag& f) {
  const int k = f.type_order();
  const int n = f.order();
  const int a = f1.order() - k;
  const int b = f2.order() - k;
  const Adj g = adjacency(f.graph());
  const std::string k1 = flag_key(f1), k2 = flag_key(f2);
  std::vector<int> labels(k);
  std::iota(labels.begin(), labels.end(), 0);
  Integer hits = 0, total = 0;
  // Assign each unlabelled vertex to petal 1, petal 2 or neither.
  std::vector<int> free(n - k);
  std::iota(free.begin(), free.end(), k);
  std::size_t combos = 1;
  for (int i = 0; i < n - k; ++i) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<int> p1 = labels, p2 = labels;
    std::size_t x = c;
    for (int v : free) {
      const int d = static_cast<int>(x % 3);
      x /= 3;
      if (d == 1) p1.push_back(v);
      if (d == 2) p2.push_back(v);
    }
    if (static_cast<int>(p1.size()) != k + a || static_cast<int>(p2.size()) != k + b) continue;
    ++total;
    if (canonical_key(induced(g, p1), k) == k1 && canonical_key(induced(g, p2), k) == k2) ++hits;
  }
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

// Positive definiteness by plain Gaussian elimination: every pivot must be > 0.
// lambda_min(m) > t iff positive_definite(m - t I).
inline bool positive_definite(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (m[p][p] <= 0) return false;
    for (std::size_t i = p + 1; i < n; ++i) {
      const Rational f = m[i][p] / m[p][p];
      for (std::size_t j = p; j < n; ++j) m[i][j] -= f * m[p][j];
    }
  }
  return true;
}

}  // namespace oracle
