#include "flagcert/certificate.hpp"
#include "flagcert/construction.hpp"
#include "flagcert/parallel.hpp"
#include "flagcert/sdp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace flagcert;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Orgraph parse_graph(const std::string& text) {
  static const std::map<std::string, Orgraph (*)()> named{
      {"P3", graphs::path3},       {"C3", graphs::cycle3},  {"C4", graphs::cycle4},
      {"K12", graphs::out_star},   {"K21", graphs::in_star}, {"K2E1", graphs::arc_plus_vertex},
  };
  if (auto it = named.find(text); it != named.end()) return canonical_form(it->second());
  return canonical_form(Orgraph::from_org1(text));
}

std::string show(const Rational& r) { return to_fraction_string(r); }

std::string show_decimal(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<std::string> rationals(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(show(x));
  return out;
}

// ---------------------------------------------------------------------------

int run_enumerate(int order, std::optional<int> type_order, bool as_json) {
  std::vector<std::string> items;
  if (!type_order) {
    if (order < 0 || order > 6) throw UsageError("--order must lie in [0, 6]");
    for (const auto& g : enumerate_orgraphs(order)) items.push_back(g.to_org1());
  } else {
    if (*type_order < 0 || *type_order > 1) throw UsageError("--type-order must be 0 or 1");
    if (order < *type_order || order > 5) throw UsageError("flag order must lie in [type order, 5]");
    const TypeSigma sigma = *type_order == 0 ? TypeSigma::empty_type() : TypeSigma::vertex();
    const FlagBasis basis = enumerate_flags(sigma, order);
    for (const auto& f : basis.flags()) items.push_back(f.to_string());
  }
  if (as_json) {
    json j{{"order", order}, {"count", items.size()}, {"items", items}};
    j["type_order"] = type_order ? json(*type_order) : json(nullptr);
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << items.size() << '\n';
    for (const auto& s : items) std::cout << s << '\n';
  }
  return kOk;
}

int run_verify_order3(bool as_json) {
  const Order3Report r = verify_example_order3();
  auto checks = [](const std::vector<ExpansionCheck>& v) {
    json a = json::array();
    for (const auto& c : v)
      a.push_back({{"name", c.name}, {"ok", c.ok}, {"computed", rationals(c.computed)}});
    return a;
  };
  if (as_json) {
    json j{{"ok", r.ok},
           {"products", checks(r.products)},
           {"averages", checks(r.averages)},
           {"remainder", {{"name", r.remainder.name}, {"ok", r.remainder.ok}, {"computed", rationals(r.remainder.computed)}}},
           {"quadratic", rationals(r.quadratic)},
           {"maximiser", show(r.maximiser)},
           {"maximum", show(r.maximum)},
           {"value_at_one", show(r.value_at_one)},
           {"notes", r.notes}};
    std::cout << j.dump(1) << '\n';
  } else {
    for (const auto* group : {&r.products, &r.averages})
      for (const auto& c : *group) std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << '\n';
    std::cout << (r.remainder.ok ? "ok   " : "FAIL ") << r.remainder.name << '\n';
    std::cout << "quadratic " << show(r.quadratic[0]) << " + " << show(r.quadratic[1]) << " rho + "
              << show(r.quadratic[2]) << " rho^2\n";
    std::cout << "maximum " << show(r.maximum) << " at rho = " << show(r.maximiser) << '\n';
    std::cout << "value at rho = 1: " << show(r.value_at_one) << '\n';
    for (const auto& n : r.notes) std::cout << "note: " << n << '\n';
    std::cout << (r.ok ? "verified" : "FAILED") << '\n';
  }
  return r.ok ? kOk : kFailed;
}

int run_verify(const std::string& path, const std::string& builtin, const std::string& write_path, unsigned threads,
               bool as_json) {
  if (path.empty() == builtin.empty()) throw UsageError("give either a certificate path or --builtin");
  if (builtin == "p3-order3") return run_verify_order3(as_json);
  Certificate cert;
  try {
    cert = builtin.empty() ? load_certificate(path) : builtin_certificate(builtin);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!write_path.empty()) save_certificate(cert, write_path);
  const VerificationReport r = verify(cert, threads);
  const Orgraph& worst = enumerate_orgraphs(cert.host_order)[r.min_slack_index];
  if (as_json) {
    json j{{"ok", r.claimed_bound_ok},
           {"psd", r.psd_ok},
           {"target", cert.target.to_org1()},
           {"bound", show(cert.bound)},
           {"host_order", cert.host_order},
           {"hosts", r.slack.size()},
           {"min_slack", show(r.min_slack)},
           {"min_slack_graph", worst.to_org1()},
           {"implied_bound", show(r.implied_bound)},
           {"min_eigenvalue", r.min_eigenvalue}};
    if (!r.psd_ok) j["psd_failure"] = {{"reason", r.psd.reason}, {"witness", rationals(r.psd.witness)}};
    std::cout << j.dump(1) << '\n';
  } else {
    std::cout << "target         " << cert.target.to_org1() << '\n';
    std::cout << "bound          " << show(cert.bound) << " (" << to_decimal_string(cert.bound, 8) << ")\n";
    std::cout << "hosts          " << r.slack.size() << " of order " << cert.host_order << '\n';
    std::cout << "psd            " << (r.psd_ok ? "yes" : "no: " + r.psd.reason) << '\n';
    std::cout << "min eigenvalue " << show_decimal(r.min_eigenvalue, 6) << '\n';
    std::cout << "min slack      " << show(r.min_slack) << " (" << to_decimal_string(r.min_slack, 8) << ") at "
              << worst.to_org1() << '\n';
    std::cout << "implied bound  " << show(r.implied_bound) << " (" << to_decimal_string(r.implied_bound, 8)
              << ")\n";
    std::cout << (r.claimed_bound_ok ? "verified" : "FAILED") << '\n';
  }
  return r.claimed_bound_ok ? kOk : kFailed;
}

int run_construct(const std::string& path, const std::string& builtin, int max_order, const std::string& target_text,
                  bool as_json) {
  if (path.empty() == builtin.empty()) throw UsageError("give either a spec path or --builtin");
  BlowupSpec spec;
  std::optional<Orgraph> target;
  try {
    spec = builtin.empty() ? load_blowup_spec(path) : builtin_construction(builtin);
    if (!target_text.empty()) target = parse_graph(target_text);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (target) max_order = target->order();
  if (max_order < 0 || max_order > 5) throw UsageError("--max-order must lie in [0, 5]");
  const LimitDensities d = limit_densities(spec, max_order);
  auto value = [&](int k, std::size_t i) {
    return d.exact ? show(d.exact_values[k][i]) : show_decimal(d.values[k][i], 12);
  };
  if (target) {
    const std::size_t i = orgraph_index(*target);
    if (as_json)
      std::cout << json{{"target", target->to_org1()}, {"exact", d.exact}, {"density", value(target->order(), i)}}.dump(1)
                << '\n';
    else
      std::cout << value(target->order(), i) << '\n';
    return kOk;
  }
  if (as_json) {
    json levels = json::array();
    for (int k = 0; k <= max_order; ++k) {
      json level = json::object();
      const auto& gs = enumerate_orgraphs(k);
      for (std::size_t i = 0; i < gs.size(); ++i) level[gs[i].to_org1()] = value(k, i);
      levels.push_back(level);
    }
    std::cout << json{{"exact", d.exact}, {"max_order", max_order}, {"densities", levels}}.dump(1) << '\n';
  } else {
    for (int k = 0; k <= max_order; ++k) {
      const auto& gs = enumerate_orgraphs(k);
      for (std::size_t i = 0; i < gs.size(); ++i) std::cout << k << ' ' << gs[i].to_org1() << ' ' << value(k, i) << '\n';
    }
  }
  return kOk;
}

int run_sdp_export(const std::string& target_text, int host_order, int type_order, int flag_order,
                   const std::string& out_path, unsigned threads) {
  Orgraph target;
  try {
    target = parse_graph(target_text);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (type_order < 0 || type_order > 1) throw UsageError("--type-order must be 0 or 1");
  if (host_order > 5 || 2 * flag_order - type_order > host_order)
    throw UsageError("need 2 * flag-order - type-order <= order <= 5");
  const TypeSigma sigma = type_order == 0 ? TypeSigma::empty_type() : TypeSigma::vertex();
  const SdpProblem problem = build_problem(target, sigma, flag_order, host_order, threads);
  if (out_path.empty() || out_path == "-") export_sdpa(problem, std::cout);
  else export_sdpa(problem, out_path);
  std::cerr << "dimension " << problem.dim() << ", " << problem.host_count() << " hosts, "
            << problem.variable_count() << " variables\n";
  return kOk;
}

int run_sdp_dump(const std::string& builtin, const std::string& out_path) {
  RationalMatrix m;
  Rational bound;
  try {
    m = builtin_matrix(builtin);
    bound = builtin_certificate(builtin).bound;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (out_path.empty() || out_path == "-") {
    write_solution(std::cout, m, bound);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    write_solution(out, m, bound);
  }
  return kOk;
}

std::vector<Integer> parse_denominators(const std::string& text) {
  std::vector<Integer> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      Integer d(tok, 10);
      if (d <= 0) throw std::invalid_argument(tok);
      out.push_back(d);
    } catch (const std::exception&) {
      throw UsageError("bad denominator '" + tok + "'");
    }
  }
  if (out.empty()) throw UsageError("no denominators given");
  return out;
}

int run_sdp_round(const std::string& problem_path, const std::string& solution_path, const std::string& denominators,
                  const std::string& out_path, bool ordered, unsigned threads, bool as_json) {
  SdpProblem problem = [&] {
    try {
      return read_sdpa_file(problem_path, threads);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }();
  NumericSolution solution;
  try {
    solution = read_solution_file(solution_path, problem.dim());
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const RoundingResult result =
      round_and_verify(problem, solution, parse_denominators(denominators),
                       ordered ? FlagConvention::OrderedTuples : FlagConvention::Unordered, threads);
  if (result.certificate && !out_path.empty()) save_certificate(*result.certificate, out_path);
  if (as_json) {
    json attempts = json::array();
    for (const auto& a : result.attempts)
      attempts.push_back({{"denominator", a.denominator.get_str()},
                          {"psd", a.psd_ok},
                          {"bound", show(a.bound)},
                          {"implied_bound", show(a.implied_bound)},
                          {"diagnosis", a.diagnosis},
                          {"witness", rationals(a.psd_witness)}});
    json j{{"ok", result.certificate.has_value()}, {"attempts", attempts}};
    if (result.certificate) {
      j["bound"] = show(result.certificate->bound);
      j["implied_bound"] = show(result.report->implied_bound);
    }
    std::cout << j.dump(1) << '\n';
  } else {
    for (const auto& a : result.attempts) {
      std::cout << "D = " << a.denominator.get_str() << ": " << a.diagnosis << ", implied bound "
                << to_decimal_string(a.implied_bound, 8) << ", bound " << show(a.bound) << '\n';
      if (!a.psd_ok) {
        std::cout << "  witness";
        for (const auto& x : a.psd_witness) std::cout << ' ' << show(x);
        std::cout << "  (x^T Q x = " << show(a.psd_witness_value) << ")\n";
      }
    }
    if (result.certificate)
      std::cout << "certified " << show(result.certificate->bound) << (out_path.empty() ? "" : " -> " + out_path)
                << '\n';
    else
      std::cout << "FAILED: no denominator gave a PSD matrix\n";
  }
  return result.certificate ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact flag-algebra certificates for induced densities in oriented graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  unsigned threads = threads_from_environment();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", threads, "Worker threads (default: FLAGCERT_THREADS or 1)")->check(CLI::PositiveNumber);

  int enum_order = 0;
  int enum_type = -1;
  auto* enumerate = app.add_subcommand("enumerate", "List orgraphs, or vertex-type flags, of one order");
  enumerate->add_option("--order", enum_order, "Order")->required();
  enumerate->add_option("--type-order", enum_type, "List flags of this type order (0 or 1) instead of graphs")
      ->check(CLI::Range(0, 1));

  std::string verify_path, verify_builtin, verify_write;
  auto* verify_cmd = app.add_subcommand("verify", "Check a certificate exactly");
  verify_cmd->add_option("certificate", verify_path, "Certificate file");
  verify_cmd->add_option("--builtin", verify_builtin, "Shipped certificate")
      ->check(CLI::IsMember({"p3", "c4", "k12", "k2e1", "p3-order3"}));
  verify_cmd->add_option("--write", verify_write, "Also save the certificate as JSON");

  std::string construct_path, construct_builtin, construct_target;
  int construct_order = 4;
  auto* construct = app.add_subcommand("construct", "Limit densities of a weighted recursive blowup");
  construct->add_option("spec", construct_path, "Blowup spec file");
  construct->add_option("--builtin", construct_builtin, "Shipped construction")
      ->check(CLI::IsMember({"c3", "c4", "k12", "2tournaments"}));
  construct->add_option("--max-order", construct_order, "Largest order to report (<= 5)");
  construct->add_option("--target", construct_target, "Print only this graph's density (org1 or P3, C3, C4, K12, K21, K2E1)");

  auto* sdp = app.add_subcommand("sdp", "Export the certificate-search SDP and round solver output");
  sdp->require_subcommand(1);
  sdp->fallthrough();
  std::string export_target, export_out = "-";
  int export_order = 5, export_type = 1, export_flag_order = 3;
  auto* sdp_export = sdp->add_subcommand("export", "Write the SDP in SDPA sparse format");
  sdp_export->add_option("--target", export_target, "Target graph")->required();
  sdp_export->add_option("--order", export_order, "Host order N");
  sdp_export->add_option("--type-order", export_type, "Type order (0 or 1)");
  sdp_export->add_option("--flag-order", export_flag_order, "Flag order");
  sdp_export->add_option("--out", export_out, "Output file (default stdout)");

  std::string dump_builtin, dump_out = "-";
  auto* sdp_dump = sdp->add_subcommand("dump", "Write a shipped matrix in solution format");
  sdp_dump->add_option("--builtin", dump_builtin, "p3, c4 or k12")->required()->check(CLI::IsMember({"p3", "c4", "k12"}));
  sdp_dump->add_option("--out", dump_out, "Output file (default stdout)");

  std::string round_problem, round_solution, round_out, round_dens = "100,1000,10000";
  bool round_ordered = false;
  auto* sdp_round = sdp->add_subcommand("round", "Rationalise a numerical solution and verify it");
  sdp_round->add_option("--problem", round_problem, "SDPA file from sdp export")->required();
  sdp_round->add_option("--solution", round_solution, "d lines of d numbers, then b")->required();
  sdp_round->add_option("--denominators", round_dens, "Comma-separated denominators to try");
  sdp_round->add_option("--out", round_out, "Write the certificate here");
  sdp_round->add_flag("--ordered-flags", round_ordered, "Solution uses ordered-tuple flag densities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const bool as_json = format == "json";
  try {
    if (*enumerate) return run_enumerate(enum_order, enum_type < 0 ? std::nullopt : std::optional<int>(enum_type), as_json);
    if (*verify_cmd) return run_verify(verify_path, verify_builtin, verify_write, threads, as_json);
    if (*construct) return run_construct(construct_path, construct_builtin, construct_order, construct_target, as_json);
    if (*sdp_export) return run_sdp_export(export_target, export_order, export_type, export_flag_order, export_out, threads);
    if (*sdp_dump) return run_sdp_dump(dump_builtin, dump_out);
    if (*sdp_round)
      return run_sdp_round(round_problem, round_solution, round_dens, round_out, round_ordered, threads, as_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
