// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance        run all criteria, exit 0 iff all pass
//   acceptance N      run criterion N only
#include "flagcert/certificate.hpp"
#include "flagcert/construction.hpp"
#include "flagcert/flag.hpp"
#include "flagcert/linalg.hpp"
#include "flagcert/orgraph.hpp"
#include "flagcert/parallel.hpp"
#include "flagcert/sdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace flagcert;

namespace {

// Pinned tolerances and limits.
constexpr double kEnumerationSeconds = 10.0;
constexpr double kCertificateSeconds = 120.0;
constexpr double kRoundTripSeconds = 60.0;
constexpr double kConstructionTolerance = 1e-9;
constexpr double kOptimizerTolerance = 1e-6;

struct Window {
  double lo, hi;
};
constexpr Window kWindowP3{2e-5, 8e-5};
constexpr Window kWindowC4{2.5e-5, 1e-4};
constexpr Window kWindowK12{3.5e-6, 1.4e-5};

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { lines.push_back("      " + what); }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fr(const Rational& r) { return r.get_den() == 1 ? r.get_num().get_str() : to_fraction_string(r); }

unsigned worker_threads() {
  const unsigned env = threads_from_environment();
  if (env > 1) return env;
  return std::max(1u, std::thread::hardware_concurrency());
}

Outcome criterion_enumeration() {
  Outcome o;
  const auto start = Clock::now();
  const std::size_t expected[] = {1, 2, 7, 42, 582};
  for (int n = 1; n <= 5; ++n) {
    const std::size_t got = enumerate_orgraphs(n).size();
    o.check(got == expected[n - 1], "|O_" + std::to_string(n) + "| = " + std::to_string(got) + " (expected " +
                                        std::to_string(expected[n - 1]) + ")");
  }
  const std::size_t flags = enumerate_flags(TypeSigma::vertex(), 3).size();
  o.check(flags == 15, "vertex-type flags of order 3: " + std::to_string(flags));
  const double t = seconds_since(start);
  o.check(t < kEnumerationSeconds, "runtime " + fmt(t) + " s < " + fmt(kEnumerationSeconds) + " s");
  return o;
}

Outcome criterion_edge_expansion() {
  Outcome o;
  const TypeSigma zero = TypeSigma::empty_type();
  const FlagBasis o3 = enumerate_flags(zero, 3);
  const auto c = chain_expand(Flag(zero, graphs::single_arc(), std::initializer_list<int>{}), o3);
  const std::pair<const char*, Orgraph> order[] = {
      {"C3", graphs::cycle3()},       {"TT3", graphs::transitive_tournament(3)}, {"K12", graphs::out_star()},
      {"P3", graphs::path3()},        {"K21", graphs::in_star()},                {"K2+E1", graphs::arc_plus_vertex()},
      {"E3", graphs::empty(3)}};
  const Rational expected[] = {1, 1, Rational(2, 3), Rational(2, 3), Rational(2, 3), Rational(1, 3), 0};
  for (std::size_t i = 0; i < 7; ++i) {
    const Rational got = c[o3.index_of(Flag(zero, order[i].second, std::initializer_list<int>{}))];
    o.check(got == expected[i], std::string("coefficient of ") + order[i].first + " = " + fr(got) + " (expected " +
                                    fr(expected[i]) + ")");
  }
  return o;
}

Outcome criterion_order3_example() {
  Outcome o;
  const Order3Report r = verify_example_order3();
  for (const auto& e : r.products) o.check(e.ok, "product " + e.name);
  for (const auto& e : r.averages) o.check(e.ok, "averaged " + e.name);
  o.check(r.remainder.ok, "remainder coefficients all >= 0");
  o.check(r.maximiser == Rational(4, 7), "maximiser rho = " + fr(r.maximiser) + " (expected 4/7)");
  o.check(r.maximum == Rational(4, 7), "value at 4/7 = " + fr(r.maximum) + " (expected 4/7)");
  o.check(r.value_at_one == Rational(1, 4), "value at 1 = " + fr(r.value_at_one) + " (expected 1/4)");
  for (const auto& n : r.notes) o.note(n);
  return o;
}

Outcome criterion_certificate(const char* name, const char* matrix, const Rational& bound, Window window) {
  Outcome o;
  const unsigned threads = worker_threads();
  const auto start = Clock::now();
  const Certificate cert = builtin_certificate(name);
  const VerificationReport r = verify(cert, threads);
  const double t = seconds_since(start);
  const RationalMatrix published = builtin_matrix(matrix);
  const bool published_psd = psd_check_exact(published).psd;

  o.check(published_psd, std::string(matrix) + " is exactly PSD");
  o.check(r.psd_ok, "certificate matrix D " + std::string(matrix) + " D is exactly PSD");
  o.check(r.min_slack >= 0, "min slack over " + std::to_string(r.slack.size()) + " graphs = " +
                                to_decimal_string(r.min_slack, 6) + " >= 0");
  o.check(r.implied_bound <= bound,
          "implied bound " + to_decimal_string(r.implied_bound, 8) + " <= " + to_decimal_string(bound));
  const double lam = min_eigenvalue_float(published);
  o.check(lam >= window.lo && lam <= window.hi,
          "min eigenvalue of " + std::string(matrix) + " = " + fmt(lam) + " in [" + fmt(window.lo) + ", " +
              fmt(window.hi) + "]");
  o.check(t < kCertificateSeconds, "exact verification " + fmt(t) + " s < " + fmt(kCertificateSeconds) + " s");

  // Diagnostics for the eigenvalue clause.
  o.note("min eigenvalue of the converted certificate matrix: " + fmt(r.min_eigenvalue));
  const ScaledIntegerMatrix ints = factor_scale(published);
  RationalMatrix unit(published.dim());
  for (std::size_t i = 0; i < published.dim(); ++i)
    for (std::size_t j = 0; j < published.dim(); ++j) unit(i, j) = ints.integers[i][j];
  const double int_lam = min_eigenvalue_float(unit);
  const double power = std::pow(10.0, std::floor(std::log10(to_double(ints.scale))));
  o.note("published scale " + fr(ints.scale) + "; min eigenvalue of the integer array times " + fmt(power) + ": " +
         fmt(int_lam * power));
  return o;
}

Outcome criterion_k2e1() {
  Outcome o;
  const Certificate cert = builtin_certificate("k2e1");
  const VerificationReport r = verify(cert);
  o.check(cert.host_order == 3, "host order 3");
  o.check(cert.q.dim() == 3, "3 x 3 matrix");
  o.check(r.psd_ok, "matrix exactly PSD");
  o.check(r.min_slack >= 0, "min slack " + fr(r.min_slack) + " >= 0");
  o.check(cert.bound == Rational(3, 4) && r.claimed_bound_ok, "bound 3/4 certified");
  o.note("implied bound " + fr(r.implied_bound));
  return o;
}

Outcome criterion_constructions() {
  Outcome o;
  const LimitDensities c4 = limit_densities(builtin_construction("c4"), 4);
  o.check(c4.exact_density(graphs::path3()) == Rational(2, 5),
          "uniform C4 blowup, P3 density = " + fr(c4.exact_density(graphs::path3())));
  o.check(c4.exact_density(graphs::cycle4()) == Rational(2, 21),
          "uniform C4 blowup, C4 density = " + fr(c4.exact_density(graphs::cycle4())));
  const LimitDensities c3 = limit_densities(builtin_construction("c3"), 3);
  o.check(c3.exact_density(graphs::cycle3()) == Rational(1, 4),
          "uniform C3 blowup, C3 density = " + fr(c3.exact_density(graphs::cycle3())));
  const LimitDensities two = limit_densities(builtin_construction("2tournaments"), 3);
  o.check(two.exact_density(graphs::arc_plus_vertex()) == Rational(3, 4),
          "two transitive parts, K2+E1 density = " + fr(two.exact_density(graphs::arc_plus_vertex())));

  const double s = (2 * std::sqrt(2.0) - 1) / 7;
  const LimitDensities k12 = limit_densities(k12_spec(s), 3);
  const double d = k12.density(graphs::out_star());
  const double d_err = std::abs(d - (6 - 4 * std::sqrt(2.0)));
  o.check(d_err <= kConstructionTolerance, "K12 construction density " + fmt(d) + ", |d - (6 - 4 sqrt 2)| = " +
                                               fmt(d_err) + " <= " + fmt(kConstructionTolerance));
  const double rho = k12.density(graphs::empty(2));
  const double rho_err = std::abs(rho - (1 - s) / (3 * s + 1));
  o.check(rho_err <= kConstructionTolerance, "non-edge density " + fmt(rho) + ", error " + fmt(rho_err));
  const WeightOptimum opt = optimize_weight([](double w) { return k12_spec(w); }, graphs::out_star());
  const double s_err = std::abs(opt.s - s);
  o.check(s_err <= kOptimizerTolerance,
          "optimizer s = " + fmt(opt.s) + ", |s - s*| = " + fmt(s_err) + " <= " + fmt(kOptimizerTolerance));
  return o;
}

// Chain rule p(f1, H) = sum_F p(f1, F) p(F, H) over every order chain k <= l <= m <= 5.
bool chain_rule_exhaustive(const TypeSigma& sigma, unsigned threads, std::string& detail) {
  const int k = sigma.order();
  std::map<int, FlagBasis> bases;
  for (int l = std::max(k, 1); l <= 5; ++l) bases.emplace(l, enumerate_flags(sigma, l));
  // dens[(l, m)][i][j] = p(bases[l][i], bases[m][j])
  std::map<std::pair<int, int>, std::vector<std::vector<Rational>>> dens;
  for (auto& [l, bl] : bases)
    for (auto& [m, bm] : bases) {
      if (m < l) continue;
      auto& rows = dens[{l, m}];
      rows.resize(bl.size());
      parallel_for(bl.size(), threads, [&, l = l](std::size_t i) { rows[i] = chain_expand(bases.at(l)[i], bm); });
    }
  std::size_t identities = 0;
  for (auto& [l, bl] : bases)
    for (auto& [m, bm] : bases) {
      if (m < l) continue;
      for (auto& [n, bn] : bases) {
        if (n < m) continue;
        const auto& lm = dens[{l, m}];
        const auto& mn = dens[{m, n}];
        const auto& ln = dens[{l, n}];
        std::vector<std::string> failures(bl.size());
        parallel_for(bl.size(), threads, [&, m = m](std::size_t i) {
          std::vector<std::size_t> support;
          for (std::size_t j = 0; j < bm.size(); ++j)
            if (lm[i][j] != 0) support.push_back(j);
          for (std::size_t h = 0; h < bn.size(); ++h) {
            Rational sum = 0;
            for (std::size_t j : support)
              if (mn[j][h] != 0) sum += lm[i][j] * mn[j][h];
            if (sum != ln[i][h]) {
              failures[i] = bl[i].to_string() + " -> " + bn[h].to_string() + " via order " + std::to_string(m);
              return;
            }
          }
        });
        for (const auto& f : failures)
          if (!f.empty()) {
            detail = "fails at " + f;
            return false;
          }
        identities += bl.size() * bn.size();
      }
    }
  detail = std::to_string(identities) + " identities";
  return true;
}

Outcome criterion_properties() {
  Outcome o;
  const unsigned threads = worker_threads();
  for (const TypeSigma& sigma : {TypeSigma::empty_type(), TypeSigma::vertex()}) {
    std::string detail;
    const bool ok = chain_rule_exhaustive(sigma, threads, detail);
    o.check(ok, "chain rule, type order " + std::to_string(sigma.order()) + ", orders up to 5: " + detail);
  }

  // Normalisation: densities of one order sum to 1, and products over a
  // complete basis sum to 1 on every host.
  bool norm = true;
  for (int n = 0; n <= 5 && norm; ++n)
    for (const auto& host : enumerate_orgraphs(5)) {
      Rational total = 0;
      for (const auto& g : enumerate_orgraphs(n)) total += induced_density(g, host);
      norm = norm && total == 1;
    }
  const FlagBasis b3 = vertex_type_order3_basis();
  const ProductTable table = product_table(b3, 5, threads);
  for (std::size_t g = 0; g < table.host_count() && norm; ++g) {
    Rational total = 0;
    for (const auto& v : table.block(g)) {
      norm = norm && v >= 0 && v <= 1;
      total += v;
    }
    norm = norm && total == 1;
  }
  o.check(norm, "density normalisation (orders 0..5 over all 582 hosts; sum_ij c_ij(G) = 1)");

  // Converse permutation invariance of the P3 and C4 certificates.
  const auto pi = converse_permutation(b3);
  for (const char* name : {"p3", "c4"}) {
    const Certificate cert = builtin_certificate(name);
    const bool invariant = cert.q.permuted(pi) == cert.q;
    o.check(invariant, std::string(name) + " certificate matrix satisfies Q = P Q P^T for the converse permutation");
  }

  // Basis permutation covariance of verify.
  const Certificate p3 = builtin_certificate("p3");
  const VerificationReport base = verify(p3, table, threads);
  std::mt19937 rng(2024);
  bool covariant = true;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::size_t> perm(b3.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Certificate p = p3;
    for (std::size_t i = 0; i < perm.size(); ++i) p.flags[i] = p3.flags[perm[i]];
    p.q = p3.q.permuted(perm);
    const VerificationReport r = verify(p, threads);
    covariant = covariant && r.psd_ok == base.psd_ok && r.slack == base.slack;
  }
  o.check(covariant, "verify is covariant under 3 random basis permutations (identical slack vectors)");
  return o;
}

Outcome criterion_round_trip() {
  Outcome o;
  const unsigned threads = worker_threads();
  const auto start = Clock::now();
  const SdpProblem problem = build_problem(graphs::path3(), TypeSigma::vertex(), 3, 5, threads);
  std::stringstream file;
  export_sdpa(problem, file);
  const SdpProblem back = read_sdpa(file, threads);

  std::stringstream sol_text;
  write_solution(sol_text, builtin_matrix("p3"), ratio(4446, 10000));
  const NumericSolution sol = read_solution(sol_text, back.dim());
  const RoundingResult r = round_and_verify(back, sol, {100, 10000}, FlagConvention::OrderedTuples, threads);
  const double t = seconds_since(start);
  for (const auto& a : r.attempts)
    o.note("denominator " + a.denominator.get_str() + ": " + (a.psd_ok ? "PSD" : "not PSD") +
           (a.diagnosis.empty() ? "" : " (" + a.diagnosis + ")"));
  o.check(r.certificate.has_value(), "round_and_verify produced a passing certificate");
  if (r.certificate) {
    const Certificate shipped = builtin_certificate("p3");
    o.check(r.certificate->q == shipped.q && r.certificate->flags == shipped.flags,
            "rounded matrix and flags equal the shipped P3 certificate");
    o.check(r.report->min_slack >= 0, "min slack " + to_decimal_string(r.report->min_slack, 6) + " >= 0");
    o.check(r.report->implied_bound <= ratio(4446, 10000),
            "implied bound " + to_decimal_string(r.report->implied_bound, 8) + " <= 0.4446");
    o.note("certified bound " + fr(r.certificate->bound));
  }
  o.check(t < kRoundTripSeconds, "round trip " + fmt(t) + " s < " + fmt(kRoundTripSeconds) + " s");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
      {"enumeration counts", criterion_enumeration},
      {"edge density expanded in order 3", criterion_edge_expansion},
      {"order-3 worked example", criterion_order3_example},
      {"P3 certificate", [] { return criterion_certificate("p3", "A", ratio(4446, 10000), kWindowP3); }},
      {"C4 certificate", [] { return criterion_certificate("c4", "B", ratio(1104, 10000), kWindowC4); }},
      {"K12 certificate", [] { return criterion_certificate("k12", "C", ratio(4644, 10000), kWindowK12); }},
      {"K2+E1 certificate at order 3", criterion_k2e1},
      {"construction densities", criterion_constructions},
      {"property suites", criterion_properties},
      {"SDP round trip", criterion_round_trip},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  if (argc > 1) {
    for (int a = 1; a < argc; ++a) {
      const int n = std::atoi(argv[a]);
      if (n < 1 || n > static_cast<int>(criteria().size())) {
        std::cerr << "usage: acceptance [criterion 1.." << criteria().size() << "]...\n";
        return 2;
      }
      selected.push_back(static_cast<std::size_t>(n - 1));
    }
  } else {
    selected.resize(criteria().size());
    std::iota(selected.begin(), selected.end(), 0);
  }
  bool all = true;
  for (std::size_t idx : selected) {
    const auto& [title, run] = criteria()[idx];
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& line : o.lines) std::cout << "    " << line << '\n';
    std::cout << "criterion " << idx + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
