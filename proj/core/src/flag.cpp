#include "flagcert/flag.hpp"

#include "flagcert/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace flagcert {

namespace {

/// Relabels the unlabelled tail (vertices k..n-1) to the smallest org1 string.
Orgraph normalise_tail(const Orgraph& g, int k) {
  const int n = g.order();
  const int m = n - k;
  if (m <= 1) return g;
  Orgraph best = g;
  std::uint64_t best_code = g.code();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (const auto& p : permutations(m)) {
    for (int i = 0; i < m; ++i) order[k + i] = k + p[i];
    Orgraph cand = g.relabeled(order);
    if (auto c = cand.code(); c < best_code) {
      best_code = c;
      best = cand;
    }
  }
  return best;
}

std::vector<int> tail_vertices(int n, int k) {
  std::vector<int> v(static_cast<std::size_t>(n - k));
  std::iota(v.begin(), v.end(), k);
  return v;
}

/// Ordered k-tuples of distinct vertices of {0..n-1}.
std::vector<std::vector<int>> injections(int n, int k) {
  std::vector<std::vector<int>> out;
  for (auto s : subsets(n, k)) {
    do {
      out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
  }
  return out;
}

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
  std::vector<int> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  return v;
}

std::vector<int> pick(std::span<const int> from, std::span<const int> positions) {
  std::vector<int> v;
  v.reserve(positions.size());
  for (int p : positions) v.push_back(from[static_cast<std::size_t>(p)]);
  return v;
}

std::vector<int> identity_prefix(int k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void require_same_type(const Flag& a, const Flag& b) {
  if (a.type() != b.type()) throw std::invalid_argument("flags have different types");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_small_int(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 2) throw std::invalid_argument("malformed flag '" + std::string(whole) + "'");
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed flag '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Flag normalise_labelled_prefix(const TypeSigma& sigma, const Orgraph& graph) {
  const int k = sigma.order();
  if (graph.order() < k) throw std::invalid_argument("flag smaller than its type");
  auto prefix = identity_prefix(k);
  if (graph.induced(prefix) != sigma.graph())
    throw std::invalid_argument("labelled vertices do not induce the flag type");
  return Flag(sigma, normalise_tail(graph, k));
}

Flag::Flag(const TypeSigma& sigma, const Orgraph& graph, std::span<const int> theta) {
  const int k = sigma.order();
  if (static_cast<int>(theta.size()) != k) throw std::invalid_argument("theta size differs from type order");
  if (graph.order() < k) throw std::invalid_argument("flag smaller than its type");
  std::vector<bool> used(static_cast<std::size_t>(graph.order()), false);
  std::vector<int> order;
  for (int v : theta) {
    if (v < 0 || v >= graph.order() || used[static_cast<std::size_t>(v)])
      throw std::invalid_argument("theta is not an injection into the flag's vertices");
    used[static_cast<std::size_t>(v)] = true;
    order.push_back(v);
  }
  for (int v = 0; v < graph.order(); ++v)
    if (!used[static_cast<std::size_t>(v)]) order.push_back(v);
  *this = normalise_labelled_prefix(sigma, graph.relabeled(order));
}

Flag Flag::parse(std::string_view text) {
  auto parts = split(text, ';');
  if (parts.size() != 3) throw std::invalid_argument("flag '" + std::string(text) + "' must be 'k;org1;theta'");
  const int k = parse_small_int(parts[0], text);
  Orgraph g = Orgraph::from_org1(parts[1]);
  std::vector<int> theta;
  if (!parts[2].empty()) {
    for (auto item : split(parts[2], ',')) theta.push_back(parse_small_int(item, text) - 1);
  }
  if (static_cast<int>(theta.size()) != k)
    throw std::invalid_argument("flag '" + std::string(text) + "' lists " + std::to_string(theta.size()) +
                                " labels for a type of order " + std::to_string(k));
  for (int v : theta)
    if (v < 0 || v >= g.order()) throw std::invalid_argument("flag '" + std::string(text) + "' label out of range");
  TypeSigma sigma(g.induced(theta));
  return Flag(sigma, g, theta);
}

Flag Flag::parse_canonical(std::string_view text) {
  Flag f = parse(text);
  if (f.to_string() != text)
    throw std::invalid_argument("flag '" + std::string(text) + "' is not in normalised form (expected '" +
                                f.to_string() + "')");
  return f;
}

std::string Flag::to_string() const {
  std::string s = std::to_string(sigma_.order()) + ";" + graph_.to_org1() + ";";
  for (int i = 0; i < sigma_.order(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(i + 1);
  }
  return s;
}

Flag converse(const Flag& f) {
  TypeSigma sigma(converse(f.type().graph()));
  return normalise_labelled_prefix(sigma, converse(f.graph()));
}

FlagBasis::FlagBasis(TypeSigma sigma, int flag_order, std::vector<Flag> flags)
    : sigma_(std::move(sigma)), flag_order_(flag_order), flags_(std::move(flags)) {
  if (flag_order < sigma_.order()) throw std::invalid_argument("flag order below type order");
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    const Flag& f = flags_[i];
    if (f.type() != sigma_) throw std::invalid_argument("basis flag " + std::to_string(i) + " has the wrong type");
    if (f.order() != flag_order_)
      throw std::invalid_argument("basis flag " + std::to_string(i) + " has order " + std::to_string(f.order()) +
                                  ", expected " + std::to_string(flag_order_));
    if (!index_.emplace(f.code(), i).second)
      throw std::invalid_argument("basis flag " + std::to_string(i) + " duplicates an earlier flag");
  }
}

std::size_t FlagBasis::index_of(const Flag& f) const {
  if (f.type() != sigma_ || f.order() != flag_order_) return npos;
  return index_of_code(f.code());
}

std::size_t FlagBasis::index_of_code(std::uint64_t normalised_code) const {
  auto it = index_.find(normalised_code);
  return it == index_.end() ? npos : it->second;
}

FlagBasis vertex_type_order3_basis() {
  const TypeSigma one = TypeSigma::vertex();
  constexpr int L = 0, a = 1, b = 2;
  const std::vector<std::vector<Arc>> arcs = {
      {},                          // 0
      {{L, a}},                    // 1
      {{L, a}, {L, b}},            // 2
      {{L, a}, {L, b}, {a, b}},    // 3
      {{L, a}, {b, L}},            // 4
      {{L, a}, {b, L}, {a, b}},    // 5
      {{L, a}, {b, L}, {b, a}},    // 6
      {{L, a}, {a, b}},            // 7
      {{L, a}, {b, a}},            // 8
      {{a, L}},                    // 9
      {{a, L}, {b, L}},            // 10
      {{a, L}, {b, L}, {a, b}},    // 11
      {{a, L}, {a, b}},            // 12
      {{a, L}, {b, a}},            // 13
      {{a, b}},                    // 14
  };
  std::vector<Flag> flags;
  flags.reserve(arcs.size());
  for (const auto& list : arcs) flags.push_back(normalise_labelled_prefix(one, Orgraph(3, list)));
  return FlagBasis(one, 3, std::move(flags));
}

FlagBasis enumerate_flags(const TypeSigma& sigma, int ell) {
  const int k = sigma.order();
  if (ell < k) throw std::invalid_argument("flag order " + std::to_string(ell) + " below type order");
  if (ell > 5) throw std::invalid_argument("flag order " + std::to_string(ell) + " above 5");
  if (k == 1 && ell == 3) return vertex_type_order3_basis();

  std::vector<std::pair<int, int>> free_pairs;
  for (int i = 0; i < ell; ++i)
    for (int j = i + 1; j < ell; ++j)
      if (j >= k) free_pairs.emplace_back(i, j);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free_pairs.size(); ++i) total *= 3;

  Orgraph base(ell);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) base.set_pair_code(i, j, sigma.graph().pair_code(i, j));

  std::vector<Flag> flags;
  std::unordered_map<std::uint64_t, bool> seen;
  for (std::uint64_t c = 0; c < total; ++c) {
    Orgraph g = base;
    std::uint64_t rest = c;
    for (const auto& [i, j] : free_pairs) {
      g.set_pair_code(i, j, static_cast<int>(rest % 3));
      rest /= 3;
    }
    Flag f = normalise_labelled_prefix(sigma, g);
    if (seen.emplace(f.code(), true).second) flags.push_back(f);
  }
  std::sort(flags.begin(), flags.end());
  return FlagBasis(sigma, ell, std::move(flags));
}

Rational flag_density(const Flag& f1, const Flag& f) {
  require_same_type(f1, f);
  if (f1.order() > f.order()) throw std::invalid_argument("flag_density: first flag larger than host flag");
  const int k = f.type_order();
  const int m = f.order() - k;
  const int a = f1.order() - k;
  const auto labels = identity_prefix(k);
  const auto tail = tail_vertices(f.order(), k);
  Integer hits = 0;
  for (const auto& s : subsets(m, a)) {
    Orgraph sub = f.graph().induced(concat(labels, pick(tail, s)));
    if (normalise_tail(sub, k) == f1.graph()) ++hits;
  }
  Rational r(hits, binomial(static_cast<unsigned>(m), static_cast<unsigned>(a)));
  r.canonicalize();
  return r;
}

Rational sunflower_density(const Flag& f1, const Flag& f2, const Flag& f) {
  require_same_type(f1, f);
  require_same_type(f2, f);
  const int k = f.type_order();
  const int m = f.order() - k;
  const int a = f1.order() - k;
  const int b = f2.order() - k;
  if (a + b > m) throw std::invalid_argument("sunflower_density: petals do not fit in the host flag");
  const auto labels = identity_prefix(k);
  const auto tail = tail_vertices(f.order(), k);
  Integer hits = 0;
  for (const auto& s1 : subsets(m, a)) {
    Orgraph g1 = normalise_tail(f.graph().induced(concat(labels, pick(tail, s1))), k);
    if (g1 != f1.graph()) continue;
    std::vector<int> rest;
    for (int i = 0; i < m; ++i)
      if (!std::binary_search(s1.begin(), s1.end(), i)) rest.push_back(tail[static_cast<std::size_t>(i)]);
    for (const auto& s2 : subsets(m - a, b)) {
      Orgraph g2 = normalise_tail(f.graph().induced(concat(labels, pick(rest, s2))), k);
      if (g2 == f2.graph()) ++hits;
    }
  }
  Integer total = binomial(static_cast<unsigned>(m), static_cast<unsigned>(a)) *
                  binomial(static_cast<unsigned>(m - a), static_cast<unsigned>(b));
  Rational r(hits, total);
  r.canonicalize();
  return r;
}

std::vector<Rational> chain_expand(const Flag& f1, const FlagBasis& basis) {
  if (f1.type() != basis.type()) throw std::invalid_argument("chain_expand: type mismatch");
  if (f1.order() > basis.flag_order()) throw std::invalid_argument("chain_expand: flag larger than basis order");
  std::vector<Rational> coeffs;
  coeffs.reserve(basis.size());
  for (const Flag& f : basis.flags()) coeffs.push_back(flag_density(f1, f));
  return coeffs;
}

Rational averaging_coefficient(const Flag& f) {
  const int k = f.type_order();
  const int n = f.order();
  const Orgraph& g = f.graph();
  Integer hits = 0;
  for (const auto& theta : injections(n, k)) {
    if (g.induced(theta) != f.type().graph()) continue;
    if (Flag(f.type(), g, theta) == f) ++hits;
  }
  Rational r(hits, falling_factorial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
  r.canonicalize();
  return r;
}

std::size_t flag_automorphism_count(const Flag& f) {
  const int k = f.type_order();
  const int m = f.order() - k;
  const Orgraph& g = f.graph();
  std::vector<int> order(static_cast<std::size_t>(f.order()));
  std::iota(order.begin(), order.end(), 0);
  std::size_t count = 0;
  for (const auto& p : permutations(m)) {
    for (int i = 0; i < m; ++i) order[k + i] = k + p[i];
    if (g.relabeled(order) == g) ++count;
  }
  return count;
}

std::vector<Rational> ordered_density_factors(const FlagBasis& basis) {
  std::vector<Rational> d;
  const unsigned m = static_cast<unsigned>(basis.flag_order() - basis.type().order());
  for (const auto& f : basis.flags()) {
    Rational r(Integer(static_cast<unsigned long>(flag_automorphism_count(f))), factorial(m));
    r.canonicalize();
    d.push_back(r);
  }
  return d;
}

ProductTable::ProductTable(TypeSigma sigma, int flag_order, int host_order, std::size_t dim)
    : sigma_(std::move(sigma)), flag_order_(flag_order), host_order_(host_order), dim_(dim) {
  entries_.assign(enumerate_orgraphs(host_order).size(), std::vector<Rational>(dim * dim));
}

void ProductTable::write(std::ostream& out) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t g = 0; g < entries_.size(); ++g)
        if (const Rational& v = at(i, j, g); v != 0) out << i << ' ' << j << ' ' << g << ' ' << to_fraction_string(v) << '\n';
}

ProductTable product_table(const FlagBasis& basis, int host_order, unsigned threads) {
  const int k = basis.type().order();
  const int ell = basis.flag_order();
  const int petal = ell - k;
  if (2 * ell - k > host_order)
    throw std::invalid_argument("host order " + std::to_string(host_order) + " too small for products of order-" +
                                std::to_string(ell) + " flags");
  if (host_order > 5) throw std::invalid_argument("host order above 5 is not supported");

  const std::size_t d = basis.size();
  ProductTable table(basis.type(), ell, host_order, d);
  const auto& hosts = enumerate_orgraphs(host_order);
  const int m = host_order - k;
  const Integer denominator = falling_factorial(static_cast<unsigned>(host_order), static_cast<unsigned>(k)) *
                              binomial(static_cast<unsigned>(m), static_cast<unsigned>(petal)) *
                              binomial(static_cast<unsigned>(m - petal), static_cast<unsigned>(petal));
  const auto placements = injections(host_order, k);
  const auto first_petals = subsets(m, petal);
  const auto second_petals = subsets(m - petal, petal);

  parallel_for(hosts.size(), threads, [&](std::size_t h) {
    const Orgraph& g = hosts[h];
    std::vector<long> counts(d * d, 0);
    for (const auto& theta : placements) {
      if (g.induced(theta) != basis.type().graph()) continue;
      std::vector<int> tail;
      for (int v = 0; v < host_order; ++v)
        if (std::find(theta.begin(), theta.end(), v) == theta.end()) tail.push_back(v);
      for (const auto& s1 : first_petals) {
        auto i = basis.index_of_code(normalise_tail(g.induced(concat(theta, pick(tail, s1))), k).code());
        if (i == FlagBasis::npos) continue;
        std::vector<int> rest;
        for (int t = 0; t < m; ++t)
          if (!std::binary_search(s1.begin(), s1.end(), t)) rest.push_back(tail[static_cast<std::size_t>(t)]);
        for (const auto& s2 : second_petals) {
          auto j = basis.index_of_code(normalise_tail(g.induced(concat(theta, pick(rest, s2))), k).code());
          if (j == FlagBasis::npos) continue;
          ++counts[i * d + j];
        }
      }
    }
    auto& block = table.block(h);
    for (std::size_t idx = 0; idx < d * d; ++idx) {
      if (counts[idx] == 0) continue;
      block[idx] = Rational(Integer(counts[idx]), denominator);
      block[idx].canonicalize();
    }
  });
  return table;
}

std::vector<std::size_t> converse_permutation(const FlagBasis& basis) {
  std::vector<std::size_t> perm(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Flag c = converse(basis[i]);
    std::size_t j = c.type() == basis.type() ? basis.index_of(c) : FlagBasis::npos;
    if (j == FlagBasis::npos)
      throw std::invalid_argument("basis is not closed under converse (flag " + std::to_string(i) + ")");
    perm[i] = j;
  }
  return perm;
}

}  // namespace flagcert
