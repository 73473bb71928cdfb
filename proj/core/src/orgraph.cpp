#include "flagcert/orgraph.hpp"

#include "flagcert/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace flagcert {

namespace {

void check_order(int order) {
  if (order < 0 || order > Orgraph::kMaxOrder)
    throw std::invalid_argument("orgraph order " + std::to_string(order) + " outside [0, 8]");
}

void check_vertex(int order, int v) {
  if (v < 0 || v >= order) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
}

int pair_count(int n) { return n * (n - 1) / 2; }

}  // namespace

Orgraph::Orgraph(int order) : order_(order) { check_order(order); }

Orgraph::Orgraph(int order, std::span<const Arc> arcs) : Orgraph(order) {
  if (!validate(order, arcs)) throw std::invalid_argument("arc list does not describe an orgraph");
  for (const Arc& a : arcs) out_[a.from] |= static_cast<std::uint8_t>(1U << a.to);
}

Orgraph Orgraph::from_org1(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0)
    throw std::invalid_argument("org1 encoding '" + std::string(text) + "' lacks 'n:' prefix");
  int n = 0;
  for (char c : text.substr(0, colon)) {
    if (c < '0' || c > '9') throw std::invalid_argument("org1 encoding '" + std::string(text) + "' has bad order");
    n = n * 10 + (c - '0');
    if (n > kMaxOrder) break;
  }
  if (n > kMaxOrder)
    throw std::invalid_argument("org1 encoding '" + std::string(text) + "' exceeds order 8");
  std::string_view digits = text.substr(colon + 1);
  if (static_cast<int>(digits.size()) != pair_count(n))
    throw std::invalid_argument("org1 encoding '" + std::string(text) + "' needs " +
                                std::to_string(pair_count(n)) + " pair digits");
  Orgraph g(n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      char c = digits[k];
      if (c < '0' || c > '2')
        throw std::invalid_argument("org1 encoding '" + std::string(text) + "' has digit '" + std::string(1, c) +
                                    "' at pair " + std::to_string(k + 1));
      g.set_pair_code(i, j, c - '0');
    }
  }
  return g;
}

std::string Orgraph::to_org1() const {
  std::string s = std::to_string(order_) + ":";
  for (int i = 0; i < order_; ++i)
    for (int j = i + 1; j < order_; ++j) s.push_back(static_cast<char>('0' + pair_code(i, j)));
  return s;
}

int Orgraph::arc_count() const {
  int total = 0;
  for (int v = 0; v < order_; ++v) total += std::popcount(static_cast<unsigned>(out_[v]));
  return total;
}

int Orgraph::out_degree(int v) const {
  check_vertex(order_, v);
  return std::popcount(static_cast<unsigned>(out_[v]));
}

int Orgraph::in_degree(int v) const {
  check_vertex(order_, v);
  int d = 0;
  for (int u = 0; u < order_; ++u) d += has_arc(u, v) ? 1 : 0;
  return d;
}

int Orgraph::pair_code(int lo, int hi) const {
  if (has_arc(lo, hi)) return 1;
  if (has_arc(hi, lo)) return 2;
  return 0;
}

void Orgraph::set_pair_code(int lo, int hi, int code) {
  check_vertex(order_, lo);
  check_vertex(order_, hi);
  if (lo == hi) throw std::invalid_argument("loops are not allowed");
  out_[lo] &= static_cast<std::uint8_t>(~(1U << hi));
  out_[hi] &= static_cast<std::uint8_t>(~(1U << lo));
  if (code == 1) {
    out_[lo] |= static_cast<std::uint8_t>(1U << hi);
  } else if (code == 2) {
    out_[hi] |= static_cast<std::uint8_t>(1U << lo);
  } else if (code != 0) {
    throw std::invalid_argument("pair code must be 0, 1 or 2");
  }
}

void Orgraph::add_arc(int from, int to) {
  check_vertex(order_, from);
  check_vertex(order_, to);
  if (from == to) throw std::invalid_argument("loops are not allowed");
  if (has_arc(to, from)) throw std::invalid_argument("arc would create a 2-cycle");
  out_[from] |= static_cast<std::uint8_t>(1U << to);
}

Orgraph Orgraph::induced(std::span<const int> vertices) const {
  Orgraph h(static_cast<int>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_vertex(order_, vertices[i]);
    std::uint8_t row = 0;
    for (std::size_t j = 0; j < vertices.size(); ++j)
      if (has_arc(vertices[i], vertices[j])) row |= static_cast<std::uint8_t>(1U << j);
    h.out_[i] = row;
  }
  return h;
}

std::uint64_t Orgraph::code() const {
  std::uint64_t c = 0;
  for (int i = 0; i < order_; ++i)
    for (int j = i + 1; j < order_; ++j) c = c * 3 + static_cast<std::uint64_t>(pair_code(i, j));
  return c;
}

bool validate(int order, std::span<const Arc> arcs) {
  if (order < 0 || order > Orgraph::kMaxOrder) return false;
  std::set<std::pair<int, int>> seen;
  for (const Arc& a : arcs) {
    if (a.from < 0 || a.from >= order || a.to < 0 || a.to >= order) return false;
    if (a.from == a.to) return false;
    if (!seen.insert({a.from, a.to}).second) return false;
    if (seen.contains({a.to, a.from})) return false;
  }
  return true;
}

const std::vector<std::vector<int>>& permutations(int n) {
  check_order(n);
  static std::array<std::vector<std::vector<int>>, Orgraph::kMaxOrder + 1> cache;
  static std::array<std::once_flag, Orgraph::kMaxOrder + 1> once;
  std::call_once(once[n], [n] {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      cache[n].push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  });
  return cache[n];
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

Orgraph canonical_form(const Orgraph& g) {
  const int n = g.order();
  if (n <= 1) return Orgraph(n);
  // Digit-wise minimisation with early exit once a candidate's prefix exceeds the best.
  const auto& perms = permutations(n);
  std::array<int, 28> best{};
  const int m = pair_count(n);
  const std::vector<int>* best_perm = &perms.front();
  {
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) best[k++] = g.pair_code(i, j);
  }
  for (const auto& p : perms) {
    int k = 0;
    bool smaller = false;
    bool larger = false;
    std::array<int, 28> cand{};
    for (int i = 0; i < n && !larger; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        int d = g.has_arc(p[i], p[j]) ? 1 : (g.has_arc(p[j], p[i]) ? 2 : 0);
        cand[k] = d;
        if (!smaller) {
          if (d > best[k]) {
            larger = true;
            break;
          }
          if (d < best[k]) smaller = true;
        }
      }
    }
    if (smaller) {
      std::copy(cand.begin(), cand.begin() + m, best.begin());
      best_perm = &p;
    }
  }
  return g.relabeled(*best_perm);
}

bool is_canonical(const Orgraph& g) { return canonical_form(g) == g; }

bool isomorphic(const Orgraph& a, const Orgraph& b) {
  return a.order() == b.order() && a.arc_count() == b.arc_count() && canonical_form(a) == canonical_form(b);
}

Orgraph converse(const Orgraph& g) {
  Orgraph h(g.order());
  for (int u = 0; u < g.order(); ++u)
    for (int v = 0; v < g.order(); ++v)
      if (g.has_arc(u, v)) h.add_arc(v, u);
  return h;
}

std::size_t automorphism_count(const Orgraph& g) {
  std::size_t count = 0;
  for (const auto& p : permutations(g.order()))
    if (g.relabeled(p) == g) ++count;
  return count;
}

namespace {

struct Catalog {
  std::vector<Orgraph> graphs;
  std::unordered_map<std::uint64_t, std::size_t> index;
};

std::vector<Orgraph> dedupe_sorted(std::vector<Orgraph> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Orgraph> build_catalog(int n) {
  if (n <= 1) return {Orgraph(n)};
  if (n <= 5) {
    const int m = pair_count(n);
    std::uint64_t total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    std::vector<Orgraph> all;
    all.reserve(static_cast<std::size_t>(total));
    for (std::uint64_t c = 0; c < total; ++c) {
      Orgraph g(n);
      std::uint64_t rest = c;
      for (int i = n - 1; i >= 0; --i)
        for (int j = n - 1; j > i; --j) {
          g.set_pair_code(i, j, static_cast<int>(rest % 3));
          rest /= 3;
        }
      all.push_back(g);
    }
    std::vector<Orgraph> canon(all.size());
    parallel_for(all.size(), std::max(1u, std::thread::hardware_concurrency()),
                 [&](std::size_t i) { canon[i] = canonical_form(all[i]); });
    return dedupe_sorted(std::move(canon));
  }
  // n == 6: extend every canonical 5-vertex graph by one vertex.
  const auto& base = enumerate_orgraphs(n - 1);
  std::vector<Orgraph> extended;
  int ext = 1;
  for (int i = 0; i < n - 1; ++i) ext *= 3;
  extended.reserve(base.size() * static_cast<std::size_t>(ext));
  for (const auto& b : base) {
    for (int c = 0; c < ext; ++c) {
      Orgraph g(n);
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n - 1; ++j) g.set_pair_code(i, j, b.pair_code(i, j));
      int rest = c;
      for (int i = 0; i < n - 1; ++i) {
        g.set_pair_code(i, n - 1, rest % 3);
        rest /= 3;
      }
      extended.push_back(g);
    }
  }
  std::vector<Orgraph> canon(extended.size());
  parallel_for(extended.size(), std::max(1u, std::thread::hardware_concurrency()),
               [&](std::size_t i) { canon[i] = canonical_form(extended[i]); });
  return dedupe_sorted(std::move(canon));
}

const Catalog& catalog(int n) {
  if (n < 0 || n > 6) throw std::invalid_argument("enumeration supports orders 0..6, got " + std::to_string(n));
  static std::array<Catalog, 7> cache;
  static std::array<std::once_flag, 7> once;
  std::call_once(once[n], [n] {
    cache[n].graphs = build_catalog(n);
    for (std::size_t i = 0; i < cache[n].graphs.size(); ++i) cache[n].index.emplace(cache[n].graphs[i].code(), i);
  });
  return cache[n];
}

}  // namespace

const std::vector<Orgraph>& enumerate_orgraphs(int order) { return catalog(order).graphs; }

std::size_t orgraph_index(const Orgraph& g) {
  const auto& cat = catalog(g.order());
  return cat.index.at(canonical_form(g).code());
}

Integer count_induced_copies(const Orgraph& target, const Orgraph& host) {
  if (target.order() > host.order())
    throw std::invalid_argument("target order exceeds host order");
  const Orgraph t = canonical_form(target);
  const int arcs = t.arc_count();
  Integer count = 0;
  for (const auto& s : subsets(host.order(), target.order())) {
    Orgraph sub = host.induced(s);
    if (sub.arc_count() == arcs && canonical_form(sub) == t) ++count;
  }
  return count;
}

Rational induced_density(const Orgraph& target, const Orgraph& host) {
  Rational r(count_induced_copies(target, host),
             binomial(static_cast<unsigned>(host.order()), static_cast<unsigned>(target.order())));
  r.canonicalize();
  return r;
}

MaxDensity max_induced_density(const Orgraph& target, int order, unsigned threads) {
  if (target.order() > order) throw std::invalid_argument("target order exceeds host order");
  const auto& hosts = enumerate_orgraphs(order);
  std::vector<Rational> values(hosts.size());
  parallel_for(hosts.size(), threads, [&](std::size_t i) { values[i] = induced_density(target, hosts[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return {values[best], hosts[best]};
}

namespace graphs {

Orgraph empty(int order) { return Orgraph(order); }

Orgraph transitive_tournament(int order) {
  Orgraph g(order);
  for (int i = 0; i < order; ++i)
    for (int j = i + 1; j < order; ++j) g.add_arc(i, j);
  return g;
}

Orgraph single_arc() { return Orgraph(2, {{0, 1}}); }
Orgraph path3() { return Orgraph(3, {{0, 1}, {1, 2}}); }
Orgraph cycle3() { return Orgraph(3, {{0, 1}, {1, 2}, {2, 0}}); }
Orgraph cycle4() { return Orgraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }
Orgraph out_star() { return Orgraph(3, {{0, 1}, {0, 2}}); }
Orgraph in_star() { return Orgraph(3, {{1, 0}, {2, 0}}); }
Orgraph arc_plus_vertex() { return Orgraph(3, {{0, 1}}); }

}  // namespace graphs

}  // namespace flagcert
