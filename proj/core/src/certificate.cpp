#include "flagcert/certificate.hpp"

#include "flagcert/parallel.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flagcert {

using nlohmann::json;

FlagBasis Certificate::basis() const { return FlagBasis(sigma, flag_order(), flags); }

int Certificate::flag_order() const {
  if (flags.empty()) throw std::invalid_argument("certificate has no flags");
  return flags.front().order();
}

void Certificate::validate() const {
  if (flags.empty()) throw std::invalid_argument("certificate has no flags");
  (void)basis();
  if (q.dim() != flags.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(flags.size()) + " flags but a " +
                                std::to_string(q.dim()) + "x" + std::to_string(q.dim()) + " matrix");
  if (!q.is_symmetric()) throw std::invalid_argument("certificate matrix is not symmetric");
  const int k = sigma.order();
  const int ell = flag_order();
  if (2 * ell - k > host_order)
    throw std::invalid_argument("host order " + std::to_string(host_order) + " too small: products of order-" +
                                std::to_string(ell) + " flags need " + std::to_string(2 * ell - k));
  if (host_order > 5) throw std::invalid_argument("host order above 5 is not supported");
  if (target.order() > host_order) throw std::invalid_argument("target order exceeds host order");
}

std::vector<Rational> certificate_load(const Certificate& cert, const ProductTable& table, unsigned threads) {
  const auto& hosts = enumerate_orgraphs(cert.host_order);
  if (table.dim() != cert.q.dim() || table.host_order() != cert.host_order)
    throw std::invalid_argument("product table does not match certificate");
  const std::size_t d = cert.q.dim();
  std::vector<Rational> load(hosts.size());
  parallel_for(hosts.size(), threads, [&](std::size_t h) {
    Rational value = induced_density(cert.target, hosts[h]);
    const auto& block = table.block(h);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Rational& c = block[i * d + j];
        if (c != 0 && cert.q(i, j) != 0) value += cert.q(i, j) * c;
      }
    load[h] = value;
  });
  return load;
}

VerificationReport verify(const Certificate& cert, const ProductTable& table, unsigned threads) {
  cert.validate();
  VerificationReport report;
  report.psd = psd_check_exact(cert.q);
  report.psd_ok = report.psd.psd;
  report.min_eigenvalue = min_eigenvalue_float(cert.q);

  auto load = certificate_load(cert, table, threads);
  report.slack.resize(load.size());
  std::size_t worst = 0;
  for (std::size_t h = 0; h < load.size(); ++h) {
    report.slack[h] = cert.bound - load[h];
    if (load[h] > load[worst]) worst = h;
  }
  report.min_slack_index = worst;
  report.implied_bound = load[worst];
  report.min_slack = report.slack[worst];
  report.claimed_bound_ok = report.psd_ok && report.min_slack >= 0;
  return report;
}

VerificationReport verify(const Certificate& cert, unsigned threads) {
  cert.validate();
  return verify(cert, product_table(cert.basis(), cert.host_order, threads), threads);
}

namespace {

RationalMatrix diagonal_congruence(const RationalMatrix& m, const std::vector<Rational>& d) {
  if (d.size() != m.dim()) throw std::invalid_argument("dimension mismatch between matrix and basis");
  RationalMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = d[i] * m(i, j) * d[j];
  return out;
}

}  // namespace

RationalMatrix from_ordered_convention(const RationalMatrix& m, const FlagBasis& basis) {
  return diagonal_congruence(m, ordered_density_factors(basis));
}

RationalMatrix to_ordered_convention(const RationalMatrix& m, const FlagBasis& basis) {
  auto d = ordered_density_factors(basis);
  for (auto& x : d) x = 1 / x;
  return diagonal_congruence(m, d);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string rational_field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("certificate: missing field '") + key + "'");
  if (!j.at(key).is_string())
    throw std::invalid_argument(std::string("certificate: field '") + key + "' must be a \"p/q\" string");
  return j.at(key).get<std::string>();
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("certificate: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  cert.validate();
  json j;
  j["type_order"] = cert.sigma.order();
  json type_edges = json::array();
  for (int a = 0; a < cert.sigma.order(); ++a)
    for (int b = a + 1; b < cert.sigma.order(); ++b) type_edges.push_back(cert.sigma.graph().pair_code(a, b));
  j["type_edges"] = type_edges;
  json flags = json::array();
  for (const auto& f : cert.flags) flags.push_back(f.to_string());
  j["flags"] = flags;
  const auto factored = factor_scale(cert.q);
  json matrix = json::array();
  for (const auto& row : factored.integers) {
    json r = json::array();
    for (const auto& v : row) {
      if (!v.fits_slong_p()) throw std::invalid_argument("matrix entry too large for the certificate format");
      r.push_back(v.get_si());
    }
    matrix.push_back(r);
  }
  j["matrix"] = matrix;
  j["scale"] = to_fraction_string(factored.scale);
  j["target"] = canonical_form(cert.target).to_org1();
  j["bound"] = to_fraction_string(cert.bound);
  j["host_order"] = cert.host_order;
  return j.dump(1);
}

Certificate certificate_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("certificate: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("certificate: top level must be an object");

  Certificate cert;
  const json& type_order = field(j, "type_order");
  if (!type_order.is_number_integer() || type_order.get<int>() < 0 || type_order.get<int>() > 5)
    throw std::invalid_argument("certificate: type_order must be an integer in [0, 5]");
  const int k = type_order.get<int>();

  const json& type_edges = field(j, "type_edges");
  if (!type_edges.is_array() || static_cast<int>(type_edges.size()) != k * (k - 1) / 2)
    throw std::invalid_argument("certificate: type_edges must list " + std::to_string(k * (k - 1) / 2) +
                                " pair digits");
  Orgraph sigma_graph(k);
  {
    std::size_t pos = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b, ++pos) {
        const json& v = type_edges[pos];
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 2)
          throw std::invalid_argument("certificate: type_edges[" + std::to_string(pos) + "] must be 0, 1 or 2");
        sigma_graph.set_pair_code(a, b, v.get<int>());
      }
  }
  cert.sigma = TypeSigma(sigma_graph);

  const json& flags = field(j, "flags");
  if (!flags.is_array() || flags.empty()) throw std::invalid_argument("certificate: flags must be a non-empty list");
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!flags[i].is_string()) throw std::invalid_argument("certificate: flags[" + std::to_string(i) + "] must be a string");
    try {
      Flag f = Flag::parse_canonical(flags[i].get<std::string>());
      if (f.type() != cert.sigma) throw std::invalid_argument("flag type differs from type_edges");
      cert.flags.push_back(f);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("certificate: flags[" + std::to_string(i) + "]: " + e.what());
    }
  }

  const json& matrix = field(j, "matrix");
  if (!matrix.is_array()) throw std::invalid_argument("certificate: matrix must be a list of rows");
  const Rational scale = parse_rational(rational_field(j, "scale"));
  if (scale <= 0) throw std::invalid_argument("certificate: scale must be positive");
  std::vector<std::vector<Integer>> ints;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    if (!matrix[r].is_array()) throw std::invalid_argument("certificate: matrix[" + std::to_string(r) + "] must be a list");
    std::vector<Integer> row;
    for (std::size_t c = 0; c < matrix[r].size(); ++c) {
      const json& v = matrix[r][c];
      if (!v.is_number_integer())
        throw std::invalid_argument("certificate: matrix[" + std::to_string(r) + "][" + std::to_string(c) +
                                    "] must be an integer");
      row.emplace_back(static_cast<long>(v.get<long long>()));
    }
    if (row.size() != matrix.size())
      throw std::invalid_argument("certificate: dimension mismatch: matrix row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " entries for a " + std::to_string(matrix.size()) +
                                  "-row matrix");
    ints.push_back(std::move(row));
  }
  if (ints.size() != cert.flags.size())
    throw std::invalid_argument("certificate: dimension mismatch: " + std::to_string(cert.flags.size()) +
                                " flags but a " + std::to_string(ints.size()) + "x" + std::to_string(ints.size()) +
                                " matrix");
  cert.q = from_scaled_integers(scale, ints);

  const json& target = field(j, "target");
  if (!target.is_string()) throw std::invalid_argument("certificate: target must be an org1 string");
  try {
    cert.target = Orgraph::from_org1(target.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("certificate: target: ") + e.what());
  }
  if (!is_canonical(cert.target))
    throw std::invalid_argument("certificate: target '" + target.get<std::string>() +
                                "' is not canonical (expected '" + canonical_form(cert.target).to_org1() + "')");

  cert.bound = parse_rational(rational_field(j, "bound"));
  const json& host_order = field(j, "host_order");
  if (!host_order.is_number_integer()) throw std::invalid_argument("certificate: host_order must be an integer");
  cert.host_order = host_order.get<int>();
  try {
    cert.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("certificate: ") + e.what());
  }
  return cert;
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return certificate_from_json(buffer.str());
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write certificate '" + path + "'");
  out << certificate_to_json(cert) << '\n';
  if (!out) throw std::runtime_error("failed writing certificate '" + path + "'");
}

// ---------------------------------------------------------------------------
// Order-3 bound by hand

namespace {

std::vector<Rational> over_order3(std::initializer_list<std::pair<Orgraph, Rational>> terms) {
  std::vector<Rational> v(enumerate_orgraphs(3).size());
  for (const auto& [g, c] : terms) v[orgraph_index(g)] += c;
  return v;
}

ExpansionCheck make_check(std::string name, std::vector<Rational> computed, std::vector<Rational> expected) {
  ExpansionCheck check{std::move(name), std::move(computed), std::move(expected), false};
  check.ok = check.computed == check.expected;
  return check;
}

}  // namespace

Order3Report verify_example_order3() {
  Order3Report report;
  const TypeSigma one = TypeSigma::vertex();
  const FlagBasis pairs = enumerate_flags(one, 2);  // non-arc, out-arc, in-arc
  const FlagBasis triples = vertex_type_order3_basis();
  const Flag& none = pairs[0];
  const Flag& out = pairs[1];
  const Flag& in = pairs[2];

  // Products F F = sum_F p(F, F; F~) F~ over the order-3 flags.
  auto product_over_triples = [&](const Flag& f) {
    std::vector<Rational> v;
    for (const auto& t : triples.flags()) v.push_back(sunflower_density(f, f, t));
    return v;
  };
  auto unit = [&](std::initializer_list<std::size_t> idx) {
    std::vector<Rational> v(triples.size());
    for (auto i : idx) v[i] = 1;
    return v;
  };
  report.products.push_back(make_check("F0 * F0 = F^1_0 + F^1_14", product_over_triples(none), unit({0, 14})));
  report.products.push_back(make_check("out * out = F^1_2 + F^1_3", product_over_triples(out), unit({2, 3})));
  report.products.push_back(make_check("in * in = F^1_10 + F^1_11", product_over_triples(in), unit({10, 11})));

  const ProductTable table = product_table(pairs, 3);
  auto averaged_square = [&](std::size_t i, const Rational& factor) {
    std::vector<Rational> v(table.host_count());
    for (std::size_t h = 0; h < v.size(); ++h) v[h] = factor * table.at(i, i, h);
    return v;
  };
  using namespace graphs;
  const Rational half(1, 2);
  const Rational three_halves(3, 2);
  report.averages.push_back(make_check("[[F0^2]] = E3 + 1/3 (K2 u E1)", averaged_square(0, 1),
                                       over_order3({{empty(3), 1}, {arc_plus_vertex(), Rational(1, 3)}})));
  report.averages.push_back(make_check("3/2 [[out^2]] = 1/2 K12 + 1/2 TT3", averaged_square(1, three_halves),
                                       over_order3({{out_star(), half}, {transitive_tournament(3), half}})));
  report.averages.push_back(make_check("3/2 [[in^2]] = 1/2 K21 + 1/2 TT3", averaged_square(2, three_halves),
                                       over_order3({{in_star(), half}, {transitive_tournament(3), half}})));

  // 1 = sum of all order-3 graphs; subtract the squares and the two targets.
  std::vector<Rational> remainder(table.host_count(), Rational(1));
  for (std::size_t h = 0; h < remainder.size(); ++h)
    remainder[h] -= table.at(0, 0, h) + three_halves * table.at(1, 1, h) + three_halves * table.at(2, 2, h);
  remainder[orgraph_index(path3())] -= 1;
  remainder[orgraph_index(cycle3())] -= 1;
  {
    ExpansionCheck check{"1 - squares - P3 - C3 >= 0 coefficient-wise", remainder, {}, true};
    for (const auto& v : remainder)
      if (v < 0) check.ok = false;
    report.remainder = check;
  }

  // Each averaged flag is linear in rho: [[F0]] = q0 (1 - rho), [[out]] = q1 rho, [[in]] = q2 rho.
  const Rational q0 = averaging_coefficient(none);
  const Rational q1 = averaging_coefficient(out);
  const Rational q2 = averaging_coefficient(in);
  // 1 - (q0 (1 - rho))^2 - 3/2 (q1 rho)^2 - 3/2 (q2 rho)^2
  const Rational c0 = 1 - q0 * q0;
  const Rational c1 = 2 * q0 * q0;
  const Rational c2 = -q0 * q0 - three_halves * q1 * q1 - three_halves * q2 * q2;
  report.quadratic = {c0, c1, c2};
  report.maximiser = -c1 / (2 * c2);
  report.maximum = c0 + c1 * report.maximiser + c2 * report.maximiser * report.maximiser;
  report.value_at_one = c0 + c1 + c2;
  report.notes.push_back("rho = 4/7 maximises the upper-bounding quadratic -7/4 rho^2 + 2 rho; "
                         "the bound is its maximum over rho in [0, 1]");
  report.notes.push_back("the Cauchy-Schwarz steps [[f^2]] >= [[f]]^2 are not coefficient-wise checkable "
                         "at fixed order; only the expansions and the scalar algebra are verified");

  bool ok = report.remainder.ok;
  for (const auto& c : report.products) ok = ok && c.ok;
  for (const auto& c : report.averages) ok = ok && c.ok;
  ok = ok && report.quadratic == std::vector<Rational>{0, 2, Rational(-7, 4)};
  ok = ok && report.maximiser == Rational(4, 7) && report.maximum == Rational(4, 7);
  ok = ok && report.value_at_one == Rational(1, 4);
  report.ok = ok;
  return report;
}

}  // namespace flagcert
