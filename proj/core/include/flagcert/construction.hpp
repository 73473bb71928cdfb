#pragma once

#include "flagcert/orgraph.hpp"
#include "flagcert/rational.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

enum class PartFill { Recurse, TransitiveLimit, EmptyLimit };

std::string_view to_string(PartFill fill);
PartFill parse_part_fill(std::string_view text);

/// Weighted recursive blowup. Part p gets weight w_p; parts joined by an arc
/// in `host` are joined by all arcs in that direction, parts not adjacent in
/// `host` have no arcs between them.
///
/// Weights are exact unless real_weights is non-empty, in which case the
/// floating-point path is used and `weights` is ignored.
struct BlowupSpec {
  Orgraph host;
  std::vector<Rational> weights;
  std::vector<double> real_weights;
  std::vector<PartFill> fill;

  bool is_exact() const { return real_weights.empty(); }
  std::size_t parts() const { return fill.size(); }
  /// Throws std::invalid_argument on size mismatch, negative weights, weights
  /// not summing to 1, or a Recurse part of weight 1 (no finite fixed point).
  void validate() const;
};

struct LimitDensities {
  bool exact = true;
  int max_order = 0;
  /// exact_values[k][i] is the density of enumerate_orgraphs(k)[i].
  std::vector<std::vector<Rational>> exact_values;
  /// Always filled; equals exact_values converted when exact.
  std::vector<std::vector<double>> values;

  double density(const Orgraph& g) const;
  /// Throws std::logic_error when the densities are not exact.
  const Rational& exact_density(const Orgraph& g) const;
};

/// Limit densities of every orgraph of order <= max_order (<= 5).
LimitDensities limit_densities(const BlowupSpec& spec, int max_order);

struct K12Form {
  double density;
  double non_edge;
};
struct K12FormExact {
  Rational density;
  Rational non_edge;
};

/// rho_bar = (1 - s) / (3s + 1), d = 4(1 - s)s / ((1 + s)(3s + 1)).
K12Form k12_closed_form(double s);
K12FormExact k12_closed_form(const Rational& s);

struct WeightOptimum {
  double s;
  double density;
};

/// Golden-section maximisation of the target's limit density over s in
/// [lo, hi], stopping once the bracket is narrower than tolerance.
WeightOptimum optimize_weight(const std::function<BlowupSpec(double)>& family, const Orgraph& target,
                              double lo = 0.0, double hi = 1.0, double tolerance = 1e-10);

/// Three parts S1 -> S2, S1 -> S3 with weights (s, (1-s)/2, (1-s)/2), all recursive.
BlowupSpec k12_spec(const Rational& s);
BlowupSpec k12_spec(double s);
/// The s that maximises the K_{1,2} density of k12_spec: (2 sqrt 2 - 1) / 7.
double k12_optimal_weight();
/// C4 host with weights (w, (1-w)/3, (1-w)/3, (1-w)/3), all recursive.
BlowupSpec c4_family(double w);

/// Names accepted by builtin_construction(): c3, c4, k12, 2tournaments.
const std::vector<std::string>& builtin_construction_names();
BlowupSpec builtin_construction(std::string_view name);

/// JSON text with host (org1), weights ("p/q" or decimal strings) and fill
/// ("recurse", "transitive" or "empty"). Weights summing to 1 exactly give an
/// exact spec; weights within 1e-12 of 1 give a floating-point spec.
BlowupSpec blowup_spec_from_json(std::string_view text);
std::string blowup_spec_to_json(const BlowupSpec& spec);
BlowupSpec load_blowup_spec(const std::string& path);

}  // namespace flagcert
