#pragma once

#include "flagcert/flag.hpp"
#include "flagcert/linalg.hpp"
#include "flagcert/orgraph.hpp"
#include "flagcert/rational.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

/// A sum-of-squares certificate: if q is PSD and every coefficient of
///   bound - target - [[ f^T q f ]]_sigma
/// in the order-N orgraph basis is non-negative, then the inducibility of
/// target is at most bound.
struct Certificate {
  TypeSigma sigma;
  std::vector<Flag> flags;
  RationalMatrix q;
  Orgraph target;
  Rational bound;
  int host_order = 0;

  FlagBasis basis() const;
  int flag_order() const;
  /// Throws std::invalid_argument when dimensions, orders or symmetry are off.
  void validate() const;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct VerificationReport {
  bool psd_ok = false;
  PsdResult psd;
  /// One entry per graph of enumerate_orgraphs(host_order), same order.
  std::vector<Rational> slack;
  Rational min_slack;
  std::size_t min_slack_index = 0;
  /// max over G of target density + quadratic term: the bound q really proves.
  Rational implied_bound;
  bool claimed_bound_ok = false;
  double min_eigenvalue = 0.0;
};

VerificationReport verify(const Certificate& cert, unsigned threads = 1);
/// Same, reusing a product table built for cert.basis() at cert.host_order.
VerificationReport verify(const Certificate& cert, const ProductTable& table, unsigned threads = 1);

/// Per-host value of target density + sum_ij q_ij c_ij(G).
std::vector<Rational> certificate_load(const Certificate& cert, const ProductTable& table, unsigned threads = 1);

/// Conversions between a matrix written against ordered-tuple flag densities
/// and the usual (unordered) densities used by verify(): D m D and its inverse,
/// with D from ordered_density_factors(). Both are congruences, so PSD-ness is
/// preserved exactly.
RationalMatrix from_ordered_convention(const RationalMatrix& m, const FlagBasis& basis);
RationalMatrix to_ordered_convention(const RationalMatrix& m, const FlagBasis& basis);

/// JSON text: type_order, type_edges, flags, matrix, scale, target, bound,
/// host_order. Rationals are "p/q" strings.
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(std::string_view text);
Certificate load_certificate(const std::string& path);
void save_certificate(const Certificate& cert, const std::string& path);

/// Names accepted by builtin_certificate(): p3, c4, k12, k2e1.
const std::vector<std::string>& builtin_certificate_names();
Certificate builtin_certificate(std::string_view name);
/// The transcribed 15x15 matrices behind the p3, c4 and k12 builtins, in the
/// ordered-tuple convention they were published in. The builtin certificates
/// carry from_ordered_convention() of these.
RationalMatrix builtin_matrix(std::string_view name);

struct ExpansionCheck {
  std::string name;
  std::vector<Rational> computed;
  std::vector<Rational> expected;
  bool ok = false;
};

/// Exact replay of the hand-sized order-3 bound for P3 and the cyclic triangle.
struct Order3Report {
  /// F F products expanded over the 15 order-3 vertex flags.
  std::vector<ExpansionCheck> products;
  /// Averaged squares expanded over the 7 graphs of order 3.
  std::vector<ExpansionCheck> averages;
  /// Coefficients of 1 - [[F0^2]] - 3/2[[out^2]] - 3/2[[in^2]] - P3 - C3 (all >= 0).
  ExpansionCheck remainder;
  /// Upper-bounding quadratic in the arc density rho: c0 + c1 rho + c2 rho^2.
  std::vector<Rational> quadratic;
  Rational maximiser;
  Rational maximum;
  Rational value_at_one;
  bool ok = false;
  std::vector<std::string> notes;
};

Order3Report verify_example_order3();

}  // namespace flagcert
