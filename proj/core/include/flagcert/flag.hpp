#pragma once

#include "flagcert/orgraph.hpp"
#include "flagcert/rational.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flagcert {

/// A fully labelled orgraph; vertex i carries label i+1.
class TypeSigma {
 public:
  TypeSigma() = default;
  explicit TypeSigma(Orgraph labelled) : graph_(labelled) {}

  static TypeSigma empty_type() { return TypeSigma(Orgraph(0)); }
  static TypeSigma vertex() { return TypeSigma(Orgraph(1)); }

  int order() const { return graph_.order(); }
  const Orgraph& graph() const { return graph_; }

  friend bool operator==(const TypeSigma&, const TypeSigma&) = default;

 private:
  Orgraph graph_;
};

/// A sigma-flag (graph, theta). Stored normalised: labelled vertices come
/// first in label order, and the unlabelled tail is relabelled to the
/// smallest org1 string among permutations that fix every label. Two flags
/// compare equal iff they are isomorphic as flags.
class Flag {
 public:
  /// theta[i] is the (0-based) vertex carrying label i+1. The induced graph on
  /// theta must equal sigma exactly.
  Flag(const TypeSigma& sigma, const Orgraph& graph, std::span<const int> theta);
  Flag(const TypeSigma& sigma, const Orgraph& graph, std::initializer_list<int> theta)
      : Flag(sigma, graph, std::span<const int>(theta.begin(), theta.size())) {}

  /// Text form `k;org1;theta` with 1-based, comma-separated theta, e.g. the
  /// out-arc 1-flag is `1;2:1;1`. The type is read off the labelled vertices.
  static Flag parse(std::string_view text);
  /// Like parse(), but rejects text that is not already in normalised form.
  static Flag parse_canonical(std::string_view text);
  std::string to_string() const;

  const TypeSigma& type() const { return sigma_; }
  int type_order() const { return sigma_.order(); }
  int order() const { return graph_.order(); }
  /// Normalised graph; vertices 0..k-1 are the labels.
  const Orgraph& graph() const { return graph_; }
  std::uint64_t code() const { return graph_.code(); }

  friend bool operator==(const Flag& a, const Flag& b) { return a.sigma_ == b.sigma_ && a.graph_ == b.graph_; }
  friend std::strong_ordering operator<=>(const Flag& a, const Flag& b) {
    if (auto c = a.sigma_.graph() <=> b.sigma_.graph(); c != 0) return c;
    return a.graph_ <=> b.graph_;
  }

 private:
  Flag(TypeSigma sigma, Orgraph normalised) : sigma_(std::move(sigma)), graph_(normalised) {}
  friend Flag normalise_labelled_prefix(const TypeSigma&, const Orgraph&);

  TypeSigma sigma_;
  Orgraph graph_;
};

/// Builds the flag whose labels sit on vertices 0..k-1 of `graph` (no type
/// check beyond the induced prefix being sigma).
Flag normalise_labelled_prefix(const TypeSigma& sigma, const Orgraph& graph);

Flag converse(const Flag& f);

/// An ordered list of distinct flags of one type and one order. Bases from
/// enumerate_flags() are complete; bases assembled from certificate files may
/// list any subset in any order.
class FlagBasis {
 public:
  FlagBasis(TypeSigma sigma, int flag_order, std::vector<Flag> flags);

  const TypeSigma& type() const { return sigma_; }
  int flag_order() const { return flag_order_; }
  std::size_t size() const { return flags_.size(); }
  const std::vector<Flag>& flags() const { return flags_; }
  const Flag& operator[](std::size_t i) const { return flags_[i]; }

  /// Index of f, or npos when f is not in the basis.
  std::size_t index_of(const Flag& f) const;
  std::size_t index_of_code(std::uint64_t normalised_code) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  TypeSigma sigma_;
  int flag_order_;
  std::vector<Flag> flags_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// All sigma-flags of order ell, sigma.order() <= ell <= 5. The vertex-type basis of
/// order 3 follows the fixed 15-flag convention used by the shipped
/// certificates (see vertex_type_order3_basis); every other basis is sorted
/// by org1 encoding.
FlagBasis enumerate_flags(const TypeSigma& sigma, int ell);

/// The 15 one-vertex-type flags of order 3 in certificate index order.
/// Label 1 is vertex 0 and a, b are vertices 1, 2:
///   0 {}            1 {1a}         2 {1a,1b}     3 {1a,1b,ab}   4 {1a,b1}
///   5 {1a,b1,ab}    6 {1a,b1,ba}   7 {1a,ab}     8 {1a,ba}      9 {a1}
///  10 {a1,b1}      11 {a1,b1,ab}  12 {a1,ab}    13 {a1,ba}     14 {ab}
/// where "xy" is the arc x -> y.
FlagBasis vertex_type_order3_basis();

/// p(f1, f): probability that a uniform (|f1|-k)-subset of the unlabelled
/// vertices of f, together with the labels, induces f1.
Rational flag_density(const Flag& f1, const Flag& f);

/// p(f1, f2; f) over ordered pairs of disjoint petals.
Rational sunflower_density(const Flag& f1, const Flag& f2, const Flag& f);

/// Coefficients p(f1, F) for every F in basis (the chain-rule expansion).
std::vector<Rational> chain_expand(const Flag& f1, const FlagBasis& basis);

/// q_sigma(F): fraction of injective label placements on the underlying graph
/// that induce sigma and reproduce F up to flag isomorphism.
Rational averaging_coefficient(const Flag& f);

/// Coefficients of [[F_i F_j]]_sigma in the order-N orgraph basis:
/// c_ij(G) = (1/(N)_k) * sum over sigma-inducing placements theta of
/// p(F_i, F_j; (G, theta)).
class ProductTable {
 public:
  ProductTable(TypeSigma sigma, int flag_order, int host_order, std::size_t dim);

  const TypeSigma& type() const { return sigma_; }
  int flag_order() const { return flag_order_; }
  int host_order() const { return host_order_; }
  std::size_t dim() const { return dim_; }
  std::size_t host_count() const { return entries_.size(); }

  const Rational& at(std::size_t i, std::size_t j, std::size_t host) const {
    return entries_[host][i * dim_ + j];
  }
  Rational& at(std::size_t i, std::size_t j, std::size_t host) { return entries_[host][i * dim_ + j]; }
  /// Row-major dim x dim block for one host graph.
  const std::vector<Rational>& block(std::size_t host) const { return entries_[host]; }
  std::vector<Rational>& block(std::size_t host) { return entries_[host]; }

  /// Text form: one `i j G-index p/q` line per non-zero entry.
  void write(std::ostream& out) const;

 private:
  TypeSigma sigma_;
  int flag_order_;
  int host_order_;
  std::size_t dim_;
  std::vector<std::vector<Rational>> entries_;
};

/// Requires 2*ell - k <= N <= 5.
ProductTable product_table(const FlagBasis& basis, int host_order, unsigned threads = 1);

/// Relabellings of the unlabelled vertices that map the flag onto itself.
std::size_t flag_automorphism_count(const Flag& f);

/// Per-flag factor |Aut(F)| / (|F| - k)!: the density of F measured over
/// ordered tuples of unlabelled vertices, divided by its usual density. A
/// matrix M written against ordered-tuple densities acts as D M D against
/// the usual ones, with D the diagonal of these factors.
std::vector<Rational> ordered_density_factors(const FlagBasis& basis);

/// Index permutation of a basis under arc reversal: converse(basis[i]) ==
/// basis[result[i]]. Throws if the basis is not closed under converse.
std::vector<std::size_t> converse_permutation(const FlagBasis& basis);

}  // namespace flagcert
