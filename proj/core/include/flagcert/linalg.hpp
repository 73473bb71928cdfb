#pragma once

#include "flagcert/rational.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flagcert {

/// Dense square matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static RationalMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  bool is_symmetric() const;
  /// result(i, j) = (*this)(perm[i], perm[j]), i.e. P^T M P for the matching
  /// permutation matrix.
  RationalMatrix permuted(std::span<const std::size_t> perm) const;
  RationalMatrix scaled(const Rational& factor) const;
  Rational quadratic_form(std::span<const Rational> x) const;
  std::vector<std::vector<double>> to_double() const;
  Rational max_abs() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> data_;
};

struct PsdResult {
  bool psd = false;
  /// Diagonal of the congruence-reduced matrix, one entry per eliminated row
  /// (all >= 0 on success).
  std::vector<Rational> pivots;
  /// On failure: x with x^T M x = witness_value < 0.
  std::vector<Rational> witness;
  Rational witness_value;
  std::size_t failed_row = 0;
  std::string reason;
};

/// Exact positive-semidefiniteness by symmetric elimination. Throws
/// std::invalid_argument on a non-symmetric matrix.
PsdResult psd_check_exact(const RationalMatrix& m);

/// Smallest eigenvalue in double precision. Throws on non-symmetric input.
double min_eigenvalue_float(const RationalMatrix& m);

/// Symmetrises by averaging (i,j) and (j,i), then rounds every entry to the
/// nearest multiple of 1/denominator. Throws on non-finite values, ragged
/// input, or a non-positive denominator.
RationalMatrix rationalize(const std::vector<std::vector<double>>& values, const Integer& denominator);

/// m = scale * integers with scale > 0 chosen so the integers are coprime.
struct ScaledIntegerMatrix {
  Rational scale;
  std::vector<std::vector<Integer>> integers;
};

ScaledIntegerMatrix factor_scale(const RationalMatrix& m);
RationalMatrix from_scaled_integers(const Rational& scale, const std::vector<std::vector<Integer>>& integers);

/// Matrix text file: `d p/q` on the first line, then d rows of d integers;
/// entry = (p/q) * integer.
RationalMatrix read_matrix(std::istream& in);
RationalMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const RationalMatrix& m);

}  // namespace flagcert
