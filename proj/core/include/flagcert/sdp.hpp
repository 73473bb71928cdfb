#pragma once

#include "flagcert/certificate.hpp"
#include "flagcert/flag.hpp"
#include "flagcert/orgraph.hpp"
#include "flagcert/rational.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flagcert {

/// minimize b subject to Q >= 0 and b - t_G - <C_G, Q> >= 0 for every G of
/// order host_order, where C_G(i, j) = table.at(i, j, G).
struct SdpProblem {
  FlagBasis basis;
  int host_order;
  Orgraph target;
  /// Density of target in each graph of enumerate_orgraphs(host_order).
  std::vector<Rational> target_density;
  ProductTable table;

  std::size_t dim() const { return basis.size(); }
  std::size_t host_count() const { return target_density.size(); }
  /// Number of scalar variables: b plus the upper triangle of Q.
  std::size_t variable_count() const { return 1 + dim() * (dim() + 1) / 2; }
};

SdpProblem build_problem(const Orgraph& target, const TypeSigma& sigma, int flag_order, int host_order,
                         unsigned threads = 1);

/// SDPA sparse format. Variable 1 is b, then Q(i, j) for i <= j in row-major
/// order. Block 1 is the d x d matrix Q, block 2 the diagonal of slacks. The
/// comment header records target, type, orders and the flag list so that
/// read_sdpa can rebuild the exact problem.
void export_sdpa(const SdpProblem& problem, std::ostream& out);
void export_sdpa(const SdpProblem& problem, const std::string& path);

/// Rebuilds the problem from the header, then checks that every numeric entry
/// in the file matches the 17-digit rendering of the rebuilt exact value.
/// Throws std::invalid_argument on any structural or numeric mismatch.
SdpProblem read_sdpa(std::istream& in, unsigned threads = 1);
SdpProblem read_sdpa_file(const std::string& path, unsigned threads = 1);

/// Plain-text solver output: d lines of d numbers (Q), then one line with b.
struct NumericSolution {
  std::vector<std::vector<double>> q;
  double b = 0.0;
};

NumericSolution read_solution(std::istream& in, std::size_t dim);
NumericSolution read_solution_file(const std::string& path, std::size_t dim);
void write_solution(std::ostream& out, const RationalMatrix& q, const Rational& b);

/// Which flag densities the numerical Q was written against. OrderedTuples
/// matrices are converted with from_ordered_convention() after rounding.
enum class FlagConvention { Unordered, OrderedTuples };

struct RoundingAttempt {
  Integer denominator;
  bool psd_ok = false;
  /// Smallest p/q >= max_G(t_G + <C_G, Q_D>) with q <= 10^4.
  Rational bound;
  Rational implied_bound;
  std::size_t worst_host = 0;
  std::vector<Rational> psd_witness;
  Rational psd_witness_value;
  std::string diagnosis;
};

struct RoundingResult {
  std::optional<Certificate> certificate;
  std::optional<VerificationReport> report;
  std::vector<RoundingAttempt> attempts;
};

/// Denominator bound used when choosing the certified bound after rounding.
inline constexpr std::uint32_t kBoundDenominator = 10000;

RoundingAttempt round_attempt(const SdpProblem& problem, const NumericSolution& solution, const Integer& denominator,
                              FlagConvention convention = FlagConvention::Unordered, unsigned threads = 1);

/// Tries each denominator in ascending order and returns the first certificate
/// that verifies, with the diagnosis of every attempt made.
RoundingResult round_and_verify(const SdpProblem& problem, const NumericSolution& solution,
                                std::vector<Integer> denominators,
                                FlagConvention convention = FlagConvention::Unordered, unsigned threads = 1);

}  // namespace flagcert
