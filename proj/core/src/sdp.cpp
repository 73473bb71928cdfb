#include "flagcert/sdp.hpp"

#include "flagcert/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace flagcert {

SdpProblem build_problem(const Orgraph& target, const TypeSigma& sigma, int flag_order, int host_order,
                         unsigned threads) {
  if (target.order() > host_order) throw std::invalid_argument("target order exceeds host order");
  FlagBasis basis = enumerate_flags(sigma, flag_order);
  ProductTable table = product_table(basis, host_order, threads);
  const auto& hosts = enumerate_orgraphs(host_order);
  std::vector<Rational> t(hosts.size());
  parallel_for(hosts.size(), threads, [&](std::size_t h) { t[h] = induced_density(target, hosts[h]); });
  return SdpProblem{std::move(basis), host_order, canonical_form(target), std::move(t), std::move(table)};
}

namespace {

// (i, j) with i <= j -> variable number, counting b as 1.
std::vector<std::pair<std::size_t, std::size_t>> variable_pairs(std::size_t d) {
  std::vector<std::pair<std::size_t, std::size_t>> v;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) v.emplace_back(i, j);
  return v;
}

Rational pair_coefficient(const SdpProblem& p, std::size_t i, std::size_t j, std::size_t h) {
  if (i == j) return p.table.at(i, i, h);
  return p.table.at(i, j, h) + p.table.at(j, i, h);
}

using EntryKey = std::tuple<std::size_t, int, std::size_t, std::size_t>;

// Every non-zero entry of the SDPA data, 1-based as in the file.
std::map<EntryKey, Rational> sdpa_entries(const SdpProblem& p) {
  std::map<EntryKey, Rational> entries;
  const std::size_t d = p.dim();
  for (std::size_t h = 0; h < p.host_count(); ++h) {
    if (p.target_density[h] != 0) entries[{0, 2, h + 1, h + 1}] = p.target_density[h];
    entries[{1, 2, h + 1, h + 1}] = 1;
  }
  const auto pairs = variable_pairs(d);
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    const auto [i, j] = pairs[v];
    entries[{v + 2, 1, i + 1, j + 1}] = 1;
    for (std::size_t h = 0; h < p.host_count(); ++h) {
      Rational c = pair_coefficient(p, i, j, h);
      if (c != 0) entries[{v + 2, 2, h + 1, h + 1}] = -c;
    }
  }
  return entries;
}

std::string type_edges_text(const TypeSigma& sigma) {
  std::string s;
  for (int a = 0; a < sigma.order(); ++a)
    for (int b = a + 1; b < sigma.order(); ++b) s += static_cast<char>('0' + sigma.graph().pair_code(a, b));
  return s.empty() ? "-" : s;
}

}  // namespace

void export_sdpa(const SdpProblem& problem, std::ostream& out) {
  const std::size_t d = problem.dim();
  const auto& sigma = problem.basis.type();
  out << "\"flagcert sdp problem: minimize b, Q psd, b - t_G - <C_G, Q> >= 0\n";
  out << "\"target " << problem.target.to_org1() << '\n';
  out << "\"type " << sigma.order() << ' ' << type_edges_text(sigma) << '\n';
  out << "\"flag_order " << problem.basis.flag_order() << '\n';
  out << "\"host_order " << problem.host_order << '\n';
  out << "\"flags";
  for (const auto& f : problem.basis.flags()) out << ' ' << f.to_string();
  out << '\n';
  out << problem.variable_count() << " = mDIM\n";
  out << "2 = nBLOCK\n";
  out << d << " -" << problem.host_count() << " = bLOCKsTRUCT\n";
  for (std::size_t v = 0; v < problem.variable_count(); ++v) out << (v ? " " : "") << (v == 0 ? 1 : 0);
  out << '\n';
  for (const auto& [key, value] : sdpa_entries(problem)) {
    const auto& [mat, block, i, j] = key;
    out << mat << ' ' << block << ' ' << i << ' ' << j << ' ' << to_decimal_string(value) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing SDPA data");
}

void export_sdpa(const SdpProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  export_sdpa(problem, out);
}

SdpProblem read_sdpa(std::istream& in, unsigned threads) {
  std::map<std::string, std::string> header;
  std::vector<std::string> data_lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '"' || line[0] == '*') {
      std::string body = line.substr(1);
      const auto space = body.find(' ');
      if (space != std::string::npos) header[body.substr(0, space)] = body.substr(space + 1);
      continue;
    }
    data_lines.push_back(line);
  }
  for (const char* key : {"target", "type", "flag_order", "host_order", "flags"})
    if (!header.count(key)) throw std::invalid_argument(std::string("SDPA file: missing header field '") + key + "'");

  std::istringstream ts(header["type"]);
  int k = 0;
  std::string edges;
  if (!(ts >> k >> edges) || k < 0) throw std::invalid_argument("SDPA file: bad type header");
  Orgraph sigma_graph(k);
  if (edges != "-") {
    if (static_cast<int>(edges.size()) != k * (k - 1) / 2) throw std::invalid_argument("SDPA file: bad type edges");
    std::size_t pos = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) sigma_graph.set_pair_code(a, b, edges[pos++] - '0');
  }
  const TypeSigma sigma(sigma_graph);
  const int flag_order = std::stoi(header["flag_order"]);
  const int host_order = std::stoi(header["host_order"]);
  SdpProblem problem = build_problem(Orgraph::from_org1(header["target"]), sigma, flag_order, host_order, threads);

  std::istringstream fs(header["flags"]);
  std::vector<std::string> flags;
  for (std::string f; fs >> f;) flags.push_back(f);
  if (flags.size() != problem.dim()) throw std::invalid_argument("SDPA file: flag list does not match the basis");
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (Flag::parse(flags[i]) != problem.basis[i])
      throw std::invalid_argument("SDPA file: flag " + std::to_string(i) + " differs from the rebuilt basis");

  auto numbers = [](std::string s) {
    for (char& c : s)
      if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') c = ' ';
    const auto eq = s.find('=');
    if (eq != std::string::npos) s = s.substr(0, eq);
    std::istringstream is(s);
    std::vector<std::string> tokens;
    for (std::string t; is >> t;) tokens.push_back(t);
    return tokens;
  };
  if (data_lines.size() < 4) throw std::invalid_argument("SDPA file: truncated");
  const auto m = numbers(data_lines[0]);
  const auto nblock = numbers(data_lines[1]);
  const auto blocks = numbers(data_lines[2]);
  const auto objective = numbers(data_lines[3]);
  if (m.size() != 1 || std::stoul(m[0]) != problem.variable_count())
    throw std::invalid_argument("SDPA file: mDIM does not match the problem");
  if (nblock.size() != 1 || nblock[0] != "2") throw std::invalid_argument("SDPA file: expected two blocks");
  if (blocks.size() != 2 || std::stol(blocks[0]) != static_cast<long>(problem.dim()) ||
      std::stol(blocks[1]) != -static_cast<long>(problem.host_count()))
    throw std::invalid_argument("SDPA file: block structure does not match the problem");
  if (objective.size() != problem.variable_count()) throw std::invalid_argument("SDPA file: bad objective vector");
  for (std::size_t v = 0; v < objective.size(); ++v)
    if (parse_rational(objective[v]) != (v == 0 ? 1 : 0))
      throw std::invalid_argument("SDPA file: objective must select b");

  const auto expected = sdpa_entries(problem);
  std::size_t seen = 0;
  for (std::size_t li = 4; li < data_lines.size(); ++li) {
    const auto tok = numbers(data_lines[li]);
    if (tok.size() != 5) throw std::invalid_argument("SDPA file: bad entry line " + std::to_string(li + 1));
    const EntryKey key{std::stoul(tok[0]), std::stoi(tok[1]), std::stoul(tok[2]), std::stoul(tok[3])};
    const auto it = expected.find(key);
    const Rational value = parse_rational(tok[4]);
    if (it == expected.end()) {
      if (value == 0) continue;
      throw std::invalid_argument("SDPA file: unexpected entry on line " + std::to_string(li + 1));
    }
    if (value != parse_rational(to_decimal_string(it->second)))
      throw std::invalid_argument("SDPA file: value on line " + std::to_string(li + 1) + " is " + tok[4] +
                                  ", expected " + to_decimal_string(it->second));
    ++seen;
  }
  if (seen != expected.size())
    throw std::invalid_argument("SDPA file: " + std::to_string(expected.size() - seen) + " entries missing");
  return problem;
}

SdpProblem read_sdpa_file(const std::string& path, unsigned threads) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_sdpa(in, threads);
}

NumericSolution read_solution(std::istream& in, std::size_t dim) {
  std::vector<double> values;
  for (std::string tok; in >> tok;) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("solution file: bad number '" + tok + "'");
    }
  }
  if (values.size() != dim * dim + 1)
    throw std::invalid_argument("solution file: expected " + std::to_string(dim * dim + 1) + " numbers, found " +
                                std::to_string(values.size()));
  NumericSolution s;
  s.q.assign(dim, std::vector<double>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) s.q[i][j] = values[i * dim + j];
  s.b = values.back();
  return s;
}

NumericSolution read_solution_file(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_solution(in, dim);
}

void write_solution(std::ostream& out, const RationalMatrix& q, const Rational& b) {
  for (std::size_t i = 0; i < q.dim(); ++i) {
    for (std::size_t j = 0; j < q.dim(); ++j) out << (j ? " " : "") << to_decimal_string(q(i, j));
    out << '\n';
  }
  out << to_decimal_string(b) << '\n';
}

namespace {

Certificate certificate_for(const SdpProblem& problem, RationalMatrix q, Rational bound) {
  Certificate cert;
  cert.sigma = problem.basis.type();
  cert.flags = problem.basis.flags();
  cert.q = std::move(q);
  cert.target = problem.target;
  cert.bound = std::move(bound);
  cert.host_order = problem.host_order;
  return cert;
}

RationalMatrix rounded(const SdpProblem& problem, const NumericSolution& solution, const Integer& denominator,
                       FlagConvention convention) {
  RationalMatrix q = rationalize(solution.q, denominator);
  if (convention == FlagConvention::OrderedTuples) q = from_ordered_convention(q, problem.basis);
  return q;
}

}  // namespace

RoundingAttempt round_attempt(const SdpProblem& problem, const NumericSolution& solution, const Integer& denominator,
                              FlagConvention convention, unsigned threads) {
  if (solution.q.size() != problem.dim())
    throw std::invalid_argument("solution dimension " + std::to_string(solution.q.size()) +
                                " does not match the problem dimension " + std::to_string(problem.dim()));
  RoundingAttempt attempt;
  attempt.denominator = denominator;
  RationalMatrix q = rounded(problem, solution, denominator, convention);
  Certificate cert = certificate_for(problem, q, 0);
  const auto load = certificate_load(cert, problem.table, threads);
  attempt.worst_host = static_cast<std::size_t>(std::max_element(load.begin(), load.end()) - load.begin());
  attempt.implied_bound = load[attempt.worst_host];
  attempt.bound = ceil_with_bounded_denominator(attempt.implied_bound, kBoundDenominator);
  const PsdResult psd = psd_check_exact(q);
  attempt.psd_ok = psd.psd;
  if (psd.psd) {
    attempt.diagnosis = "ok";
  } else {
    attempt.psd_witness = psd.witness;
    attempt.psd_witness_value = psd.witness_value;
    attempt.diagnosis = "rounded matrix is not PSD: " + psd.reason;
  }
  return attempt;
}

RoundingResult round_and_verify(const SdpProblem& problem, const NumericSolution& solution,
                                std::vector<Integer> denominators, FlagConvention convention, unsigned threads) {
  std::sort(denominators.begin(), denominators.end());
  RoundingResult result;
  for (const auto& den : denominators) {
    if (den <= 0) throw std::invalid_argument("denominators must be positive");
    RoundingAttempt attempt = round_attempt(problem, solution, den, convention, threads);
    if (attempt.psd_ok) {
      Certificate cert = certificate_for(problem, rounded(problem, solution, den, convention), attempt.bound);
      VerificationReport report = verify(cert, problem.table, threads);
      if (report.claimed_bound_ok) {
        result.attempts.push_back(std::move(attempt));
        result.certificate = std::move(cert);
        result.report = std::move(report);
        return result;
      }
      attempt.diagnosis = "verification failed, min slack " + to_decimal_string(report.min_slack, 6);
    }
    result.attempts.push_back(std::move(attempt));
  }
  return result;
}

}  // namespace flagcert
