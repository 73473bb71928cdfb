#include "flagcert/construction.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace flagcert {

using nlohmann::json;

std::string_view to_string(PartFill fill) {
  switch (fill) {
    case PartFill::Recurse: return "recurse";
    case PartFill::TransitiveLimit: return "transitive";
    case PartFill::EmptyLimit: return "empty";
  }
  return "?";
}

PartFill parse_part_fill(std::string_view text) {
  if (text == "recurse") return PartFill::Recurse;
  if (text == "transitive") return PartFill::TransitiveLimit;
  if (text == "empty") return PartFill::EmptyLimit;
  throw std::invalid_argument("unknown fill '" + std::string(text) + "' (expected recurse, transitive or empty)");
}

void BlowupSpec::validate() const {
  const std::size_t m = fill.size();
  if (m == 0) throw std::invalid_argument("blowup spec has no parts");
  if (static_cast<std::size_t>(host.order()) != m)
    throw std::invalid_argument("blowup spec: host has " + std::to_string(host.order()) + " vertices but " +
                                std::to_string(m) + " fills are given");
  if (is_exact()) {
    if (weights.size() != m) throw std::invalid_argument("blowup spec: expected " + std::to_string(m) + " weights");
    Rational total = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if (weights[p] < 0) throw std::invalid_argument("blowup spec: weight " + std::to_string(p) + " is negative");
      if (weights[p] == 1 && fill[p] == PartFill::Recurse)
        throw std::invalid_argument("blowup spec: a recursive part of weight 1 has no unique limit");
      total += weights[p];
    }
    if (total != 1) throw std::invalid_argument("blowup spec: weights sum to " + to_fraction_string(total) + ", not 1");
  } else {
    if (real_weights.size() != m)
      throw std::invalid_argument("blowup spec: expected " + std::to_string(m) + " weights");
    double total = 0;
    for (std::size_t p = 0; p < m; ++p) {
      const double w = real_weights[p];
      if (!std::isfinite(w) || w < 0)
        throw std::invalid_argument("blowup spec: weight " + std::to_string(p) + " is negative or not finite");
      if (w >= 1.0 - 1e-15 && fill[p] == PartFill::Recurse)
        throw std::invalid_argument("blowup spec: a recursive part of weight 1 has no unique limit");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("blowup spec: weights do not sum to 1");
  }
}

namespace {

constexpr int kMaxConstructionOrder = 5;

Orgraph decode(int order, std::uint64_t code) {
  Orgraph g(order);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < order; ++a)
    for (int b = a + 1; b < order; ++b) pairs.emplace_back(a, b);
  for (std::size_t t = pairs.size(); t-- > 0;) {
    g.set_pair_code(pairs[t].first, pairs[t].second, static_cast<int>(code % 3));
    code /= 3;
  }
  return g;
}

// Class index of every labelled orgraph of a given order, keyed by code().
const std::vector<std::size_t>& labelled_index(int order) {
  static std::array<std::once_flag, kMaxConstructionOrder + 1> once;
  static std::array<std::vector<std::size_t>, kMaxConstructionOrder + 1> tables;
  std::call_once(once[order], [order] {
    std::uint64_t total = 1;
    for (int i = 0; i < order * (order - 1) / 2; ++i) total *= 3;
    auto& table = tables[order];
    table.resize(total);
    for (std::uint64_t c = 0; c < total; ++c) table[c] = orgraph_index(decode(order, c));
  });
  return tables[order];
}

bool is_transitive_tournament(const Orgraph& g) {
  const int n = g.order();
  std::vector<bool> seen(n, false);
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u)
      if (u != v && !g.adjacent(u, v)) return false;
    const int d = g.out_degree(v);
    if (seen[d]) return false;
    seen[d] = true;
  }
  return true;
}

template <class T>
T power(const T& base, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

template <class T>
std::vector<std::vector<T>> solve_densities(const Orgraph& host, const std::vector<T>& w,
                                            const std::vector<PartFill>& fill, int max_order) {
  const int m = static_cast<int>(fill.size());
  // e[k][i]: probability that a random ordered k-tuple induces the labelled
  // graph enumerate_orgraphs(k)[i] in that vertex order.
  std::vector<std::vector<T>> e(max_order + 1), d(max_order + 1);
  e[0] = {T(1)};
  d[0] = {T(1)};
  for (int k = 1; k <= max_order; ++k) {
    const auto& classes = enumerate_orgraphs(k);
    e[k].assign(classes.size(), T(0));
    d[k].assign(classes.size(), T(0));
    if (k == 1) {
      e[1][0] = 1;
      d[1][0] = 1;
      continue;
    }
    T self = 0;
    for (int p = 0; p < m; ++p)
      if (fill[p] == PartFill::Recurse) self += power(w[p], k);

    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      const Orgraph& pattern = classes[ci];
      T base = 0;
      std::vector<int> phi(k, 0);
      for (;;) {
        T prob = 1;
        for (int v = 0; v < k && prob != 0; ++v) prob *= w[phi[v]];
        bool feasible = prob != 0;
        for (int u = 0; u < k && feasible; ++u)
          for (int v = u + 1; v < k && feasible; ++v)
            if (phi[u] != phi[v] &&
                (pattern.has_arc(u, v) != host.has_arc(phi[u], phi[v]) ||
                 pattern.has_arc(v, u) != host.has_arc(phi[v], phi[u])))
              feasible = false;
        if (feasible) {
          T contribution = prob;
          bool self_term = false;
          for (int p = 0; p < m && contribution != 0; ++p) {
            std::vector<int> block;
            for (int v = 0; v < k; ++v)
              if (phi[v] == p) block.push_back(v);
            const int j = static_cast<int>(block.size());
            if (j <= 1) continue;
            const Orgraph sub = pattern.induced(block);
            switch (fill[p]) {
              case PartFill::Recurse:
                if (j == k) self_term = true;
                else contribution *= e[j][labelled_index(j)[sub.code()]];
                break;
              case PartFill::TransitiveLimit:
                if (is_transitive_tournament(sub)) contribution /= T(factorial(j).get_ui());
                else contribution = 0;
                break;
              case PartFill::EmptyLimit:
                if (sub.arc_count() != 0) contribution = 0;
                break;
            }
          }
          if (!self_term) base += contribution;
        }
        int pos = k - 1;
        while (pos >= 0 && ++phi[pos] == m) phi[pos--] = 0;
        if (pos < 0) break;
      }
      e[k][ci] = base / (T(1) - self);
      d[k][ci] = e[k][ci] * T(factorial(k).get_ui()) / T(automorphism_count(pattern));
    }
  }
  return d;
}

}  // namespace

double LimitDensities::density(const Orgraph& g) const {
  if (g.order() > max_order) throw std::invalid_argument("graph order exceeds computed max order");
  return values[g.order()][orgraph_index(g)];
}

const Rational& LimitDensities::exact_density(const Orgraph& g) const {
  if (!exact) throw std::logic_error("limit densities were computed in floating point");
  if (g.order() > max_order) throw std::invalid_argument("graph order exceeds computed max order");
  return exact_values[g.order()][orgraph_index(g)];
}

LimitDensities limit_densities(const BlowupSpec& spec, int max_order) {
  if (max_order < 0 || max_order > kMaxConstructionOrder)
    throw std::invalid_argument("max order must lie in [0, 5]");
  spec.validate();
  LimitDensities out;
  out.max_order = max_order;
  out.exact = spec.is_exact();
  if (out.exact) {
    out.exact_values = solve_densities<Rational>(spec.host, spec.weights, spec.fill, max_order);
    for (const auto& level : out.exact_values) {
      std::vector<double> v;
      for (const auto& x : level) v.push_back(to_double(x));
      out.values.push_back(std::move(v));
    }
  } else {
    out.values = solve_densities<double>(spec.host, spec.real_weights, spec.fill, max_order);
  }
  return out;
}

K12Form k12_closed_form(double s) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("s must lie in (0, 1)");
  return {4 * (1 - s) * s / ((1 + s) * (3 * s + 1)), (1 - s) / (3 * s + 1)};
}

K12FormExact k12_closed_form(const Rational& s) {
  if (s <= 0 || s >= 1) throw std::invalid_argument("s must lie in (0, 1)");
  return {Rational(4 * (1 - s) * s / ((1 + s) * (3 * s + 1))), Rational((1 - s) / (3 * s + 1))};
}

WeightOptimum optimize_weight(const std::function<BlowupSpec(double)>& family, const Orgraph& target, double lo,
                              double hi, double tolerance) {
  if (!(lo < hi)) throw std::invalid_argument("empty search interval");
  if (target.order() > kMaxConstructionOrder) throw std::invalid_argument("target order exceeds 5");
  auto value = [&](double s) { return limit_densities(family(s), target.order()).density(target); };
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = value(c), fd = value(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  const double s = (a + b) / 2;
  return {s, value(s)};
}

namespace {

Orgraph k12_host() { return Orgraph(3, {{0, 1}, {0, 2}}); }

}  // namespace

BlowupSpec k12_spec(const Rational& s) {
  const Rational half_rest = (1 - s) / 2;
  return {k12_host(), {s, half_rest, half_rest}, {}, std::vector<PartFill>(3, PartFill::Recurse)};
}

BlowupSpec k12_spec(double s) {
  const double half_rest = (1 - s) / 2;
  return {k12_host(), {}, {s, half_rest, half_rest}, std::vector<PartFill>(3, PartFill::Recurse)};
}

double k12_optimal_weight() { return (2 * std::sqrt(2.0) - 1) / 7; }

BlowupSpec c4_family(double w) {
  const double rest = (1 - w) / 3;
  return {graphs::cycle4(), {}, {w, rest, rest, rest}, std::vector<PartFill>(4, PartFill::Recurse)};
}

const std::vector<std::string>& builtin_construction_names() {
  static const std::vector<std::string> names{"c3", "c4", "k12", "2tournaments"};
  return names;
}

BlowupSpec builtin_construction(std::string_view name) {
  if (name == "c3")
    return {graphs::cycle3(), std::vector<Rational>(3, Rational(1, 3)), {}, std::vector<PartFill>(3, PartFill::Recurse)};
  if (name == "c4")
    return {graphs::cycle4(), std::vector<Rational>(4, Rational(1, 4)), {}, std::vector<PartFill>(4, PartFill::Recurse)};
  if (name == "k12") return k12_spec(k12_optimal_weight());
  if (name == "2tournaments")
    return {graphs::empty(2), std::vector<Rational>(2, Rational(1, 2)), {},
            std::vector<PartFill>(2, PartFill::TransitiveLimit)};
  throw std::invalid_argument("unknown builtin construction '" + std::string(name) + "'");
}

BlowupSpec blowup_spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("blowup spec: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("blowup spec: top level must be an object");
  for (const char* key : {"host", "weights", "fill"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("blowup spec: missing field '") + key + "'");
  BlowupSpec spec;
  if (!j["host"].is_string()) throw std::invalid_argument("blowup spec: host must be an org1 string");
  spec.host = Orgraph::from_org1(j["host"].get<std::string>());
  if (!j["weights"].is_array() || !j["fill"].is_array())
    throw std::invalid_argument("blowup spec: weights and fill must be lists");
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    const auto& w = j["weights"][i];
    if (!w.is_string())
      throw std::invalid_argument("blowup spec: weights[" + std::to_string(i) + "] must be a \"p/q\" or decimal string");
    try {
      spec.weights.push_back(parse_rational(w.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("blowup spec: weights[" + std::to_string(i) + "]: " + e.what());
    }
  }
  for (std::size_t i = 0; i < j["fill"].size(); ++i) {
    const auto& f = j["fill"][i];
    if (!f.is_string()) throw std::invalid_argument("blowup spec: fill[" + std::to_string(i) + "] must be a string");
    try {
      spec.fill.push_back(parse_part_fill(f.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("blowup spec: fill[" + std::to_string(i) + "]: " + e.what());
    }
  }
  // Decimals of irrational weights only sum to 1 approximately: take the
  // floating-point path for them.
  Rational total = 0;
  for (const auto& w : spec.weights) total += w;
  if (total != 1 && std::abs(to_double(total) - 1.0) <= 1e-12) {
    for (const auto& w : spec.weights) spec.real_weights.push_back(to_double(w));
    spec.weights.clear();
  }
  spec.validate();
  return spec;
}

std::string blowup_spec_to_json(const BlowupSpec& spec) {
  spec.validate();
  json j;
  j["host"] = spec.host.to_org1();
  json weights = json::array();
  if (spec.is_exact()) {
    for (const auto& w : spec.weights) weights.push_back(to_fraction_string(w));
  } else {
    for (double w : spec.real_weights) {
      std::ostringstream os;
      os.precision(17);
      os << w;
      weights.push_back(os.str());
    }
  }
  j["weights"] = weights;
  json fill = json::array();
  for (auto f : spec.fill) fill.push_back(std::string(to_string(f)));
  j["fill"] = fill;
  return j.dump(1);
}

BlowupSpec load_blowup_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open blowup spec '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return blowup_spec_from_json(buffer.str());
}

}  // namespace flagcert
