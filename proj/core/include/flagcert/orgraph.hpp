#pragma once

#include "flagcert/rational.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

struct Arc {
  int from;
  int to;
};

/// An oriented graph on at most eight vertices: no loops, and at most one arc
/// per unordered pair. Vertices are 0-based internally; the org1 text form
/// uses 1-based pair indices.
///
/// org1: `n:d1d2...dm` with m = n(n-1)/2 digits for pairs (1,2),(1,3),...,
/// (1,n),(2,3),... where 0 = no arc, 1 = i->j, 2 = j->i. Order 0 is "0:".
class Orgraph {
 public:
  static constexpr int kMaxOrder = 8;

  Orgraph() = default;
  explicit Orgraph(int order);
  /// Throws std::invalid_argument unless the arcs form a valid orgraph.
  Orgraph(int order, std::span<const Arc> arcs);
  Orgraph(int order, std::initializer_list<Arc> arcs)
      : Orgraph(order, std::span<const Arc>(arcs.begin(), arcs.size())) {}

  static Orgraph from_org1(std::string_view text);
  std::string to_org1() const;

  int order() const { return order_; }
  bool has_arc(int from, int to) const { return (out_[from] >> to) & 1U; }
  bool adjacent(int u, int v) const { return has_arc(u, v) || has_arc(v, u); }
  int arc_count() const;
  int out_degree(int v) const;
  int in_degree(int v) const;

  /// 0 = none, 1 = lo->hi, 2 = hi->lo, for lo < hi.
  int pair_code(int lo, int hi) const;
  void set_pair_code(int lo, int hi, int code);

  /// Throws if the arc would create a loop or a 2-cycle.
  void add_arc(int from, int to);

  /// Subgraph induced on `vertices`; new vertex i is old vertices[i].
  Orgraph induced(std::span<const int> vertices) const;
  /// Same as induced() on a full permutation.
  Orgraph relabeled(std::span<const int> permutation) const { return induced(permutation); }

  /// Base-3 value of the org1 digit string (first pair most significant).
  std::uint64_t code() const;

  friend bool operator==(const Orgraph& a, const Orgraph& b) {
    return a.order_ == b.order_ && a.out_ == b.out_;
  }
  friend std::strong_ordering operator<=>(const Orgraph& a, const Orgraph& b) {
    if (auto c = a.order_ <=> b.order_; c != 0) return c;
    return a.code() <=> b.code();
  }

 private:
  int order_ = 0;
  std::array<std::uint8_t, kMaxOrder> out_{};
};

/// True iff the arc list describes an orgraph on `order` vertices: endpoints
/// in range, no loops, no pair joined in both directions, no repeated arc.
bool validate(int order, std::span<const Arc> arcs);

/// Lexicographically smallest org1 relabeling.
Orgraph canonical_form(const Orgraph& g);
bool is_canonical(const Orgraph& g);
bool isomorphic(const Orgraph& a, const Orgraph& b);

Orgraph converse(const Orgraph& g);
std::size_t automorphism_count(const Orgraph& g);

/// Supported orders: 0..6. The returned list is canonical, sorted by org1,
/// and cached for the process lifetime.
const std::vector<Orgraph>& enumerate_orgraphs(int order);
/// Position of canonical_form(g) in enumerate_orgraphs(g.order()).
std::size_t orgraph_index(const Orgraph& g);

/// Number of |target|-subsets of host vertices inducing a copy of target.
Integer count_induced_copies(const Orgraph& target, const Orgraph& host);
Rational induced_density(const Orgraph& target, const Orgraph& host);

struct MaxDensity {
  Rational value;
  Orgraph witness;
};

/// Exhaustive scan over enumerate_orgraphs(order); the witness is the first
/// maximizer in canonical order.
MaxDensity max_induced_density(const Orgraph& target, int order, unsigned threads = 1);

/// All permutations of {0..n-1} in lexicographic order (n <= 8), cached.
const std::vector<std::vector<int>>& permutations(int n);

/// Every k-subset of {0..n-1}, each sorted, in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);

namespace graphs {

Orgraph empty(int order);
Orgraph transitive_tournament(int order);
Orgraph single_arc();       ///< order 2, 1 -> 2
Orgraph path3();            ///< P3: a -> b -> c
Orgraph cycle3();           ///< cyclic triangle
Orgraph cycle4();           ///< directed 4-cycle
Orgraph out_star();         ///< K_{1,2}: centre -> both leaves
Orgraph in_star();          ///< K_{2,1}: both leaves -> centre
Orgraph arc_plus_vertex();  ///< K_2 u E_1

}  // namespace graphs

}  // namespace flagcert
