#include "flagcert/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flagcert {

RationalMatrix RationalMatrix::identity(std::size_t dim) {
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RationalMatrix RationalMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != dim_) throw std::invalid_argument("permutation size differs from matrix dimension");
  RationalMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(i, j) = (*this)(perm[i], perm[j]);
  return out;
}

RationalMatrix RationalMatrix::scaled(const Rational& factor) const {
  RationalMatrix out = *this;
  for (auto& v : out.data_) v *= factor;
  return out;
}

Rational RationalMatrix::quadratic_form(std::span<const Rational> x) const {
  if (x.size() != dim_) throw std::invalid_argument("vector size differs from matrix dimension");
  Rational total = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < dim_; ++j) row += (*this)(i, j) * x[j];
    total += x[i] * row;
  }
  return total;
}

std::vector<std::vector<double>> RationalMatrix::to_double() const {
  std::vector<std::vector<double>> out(dim_, std::vector<double>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j).get_d();
  return out;
}

Rational RationalMatrix::max_abs() const {
  Rational best = 0;
  for (const auto& v : data_)
    if (abs(v) > best) best = abs(v);
  return best;
}

PsdResult psd_check_exact(const RationalMatrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("psd_check_exact: matrix is not symmetric");
  const std::size_t d = m.dim();
  // Invariant: work == T * m * T^T, with T unit lower triangular.
  RationalMatrix work = m;
  RationalMatrix t = RationalMatrix::identity(d);
  PsdResult result;

  auto fail = [&](std::size_t row, std::vector<Rational> x, std::string reason) {
    result.psd = false;
    result.failed_row = row;
    result.witness_value = m.quadratic_form(x);
    result.witness = std::move(x);
    result.reason = std::move(reason);
    return result;
  };
  auto row_of_t = [&](std::size_t r) {
    std::vector<Rational> x(d);
    for (std::size_t c = 0; c < d; ++c) x[c] = t(r, c);
    return x;
  };

  for (std::size_t p = 0; p < d; ++p) {
    const Rational pivot = work(p, p);
    if (pivot < 0) return fail(p, row_of_t(p), "negative pivot");
    if (pivot == 0) {
      for (std::size_t q = p + 1; q < d; ++q) {
        if (work(p, q) == 0) continue;
        // y = s e_p + e_q gives y^T work y = 2 s b + c; s = -(c + 1) / (2 b) makes it -1.
        const Rational b = work(p, q);
        const Rational c = work(q, q);
        const Rational s = -(c + 1) / (2 * b);
        std::vector<Rational> x(d);
        for (std::size_t col = 0; col < d; ++col) x[col] = s * t(p, col) + t(q, col);
        return fail(p, std::move(x), "zero pivot with non-zero off-diagonal");
      }
      result.pivots.push_back(0);
      continue;
    }
    result.pivots.push_back(pivot);
    for (std::size_t q = p + 1; q < d; ++q) {
      if (work(q, p) == 0) continue;
      const Rational factor = work(q, p) / pivot;
      for (std::size_t r = p + 1; r < d; ++r) work(q, r) -= factor * work(p, r);
      for (std::size_t col = 0; col <= p; ++col) t(q, col) -= factor * t(p, col);
    }
    for (std::size_t q = p + 1; q < d; ++q) {
      work(q, p) = 0;
      work(p, q) = 0;
    }
  }
  result.psd = true;
  return result;
}

double min_eigenvalue_float(const RationalMatrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("min_eigenvalue_float: matrix is not symmetric");
  const auto d = static_cast<Eigen::Index>(m.dim());
  if (d == 0) throw std::invalid_argument("min_eigenvalue_float: empty matrix");
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
  return solver.eigenvalues()(0);
}

RationalMatrix rationalize(const std::vector<std::vector<double>>& values, const Integer& denominator) {
  if (denominator <= 0) throw std::invalid_argument("rationalize: denominator must be positive");
  const std::size_t d = values.size();
  for (const auto& row : values) {
    if (row.size() != d) throw std::invalid_argument("rationalize: matrix is not square");
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("rationalize: non-finite entry");
  }
  RationalMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double avg = i == j ? values[i][i] : 0.5 * (values[i][j] + values[j][i]);
      out(i, j) = round_to_denominator(avg, denominator);
      out(j, i) = out(i, j);
    }
  return out;
}

ScaledIntegerMatrix factor_scale(const RationalMatrix& m) {
  const std::size_t d = m.dim();
  Integer common_den = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) mpz_lcm(common_den.get_mpz_t(), common_den.get_mpz_t(), m(i, j).get_den_mpz_t());
  std::vector<std::vector<Integer>> ints(d, std::vector<Integer>(d));
  Integer g = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Rational scaled = m(i, j) * common_den;
      ints[i][j] = scaled.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i][j].get_mpz_t());
    }
  if (g == 0) g = 1;
  for (auto& row : ints)
    for (auto& v : row) v /= g;
  Rational scale(g, common_den);
  scale.canonicalize();
  return {scale, std::move(ints)};
}

RationalMatrix from_scaled_integers(const Rational& scale, const std::vector<std::vector<Integer>>& integers) {
  const std::size_t d = integers.size();
  RationalMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (integers[i].size() != d)
      throw std::invalid_argument("matrix row " + std::to_string(i + 1) + " has " +
                                  std::to_string(integers[i].size()) + " entries, expected " + std::to_string(d));
    for (std::size_t j = 0; j < d; ++j) m(i, j) = scale * Rational(integers[i][j]);
  }
  return m;
}

RationalMatrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("matrix file: missing header line");
  std::istringstream hs(header);
  long d = 0;
  std::string scale_text;
  if (!(hs >> d >> scale_text) || d <= 0) throw std::invalid_argument("matrix file: header must be 'd p/q'");
  const Rational scale = parse_rational(scale_text);
  std::vector<std::vector<Integer>> ints;
  std::string line;
  while (static_cast<long>(ints.size()) < d && std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Integer> row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.emplace_back(tok, 10);
      } catch (const std::exception&) {
        throw std::invalid_argument("matrix file: bad integer '" + tok + "' on row " + std::to_string(ints.size() + 1));
      }
    }
    if (row.empty()) continue;
    ints.push_back(std::move(row));
  }
  if (static_cast<long>(ints.size()) != d)
    throw std::invalid_argument("matrix file: expected " + std::to_string(d) + " rows, found " +
                                std::to_string(ints.size()));
  return from_scaled_integers(scale, ints);
}

RationalMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const RationalMatrix& m) {
  const auto factored = factor_scale(m);
  out << m.dim() << ' ' << to_fraction_string(factored.scale) << '\n';
  for (const auto& row : factored.integers) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j].get_str();
    out << '\n';
  }
}

}  // namespace flagcert
