#include "flagcert/certificate.hpp"

#include <sstream>
#include <stdexcept>

namespace flagcert {

namespace detail {
extern const char* const kMatrixA;
extern const char* const kMatrixB;
extern const char* const kMatrixC;
}  // namespace detail

const std::vector<std::string>& builtin_certificate_names() {
  static const std::vector<std::string> names{"p3", "c4", "k12", "k2e1"};
  return names;
}

RationalMatrix builtin_matrix(std::string_view name) {
  const char* text = nullptr;
  if (name == "p3" || name == "A") text = detail::kMatrixA;
  else if (name == "c4" || name == "B") text = detail::kMatrixB;
  else if (name == "k12" || name == "C") text = detail::kMatrixC;
  else throw std::invalid_argument("unknown builtin matrix '" + std::string(name) + "'");
  std::istringstream in(text);
  return read_matrix(in);
}

namespace {

Certificate order3_certificate(std::string_view name, const Orgraph& target, Rational bound) {
  Certificate cert;
  cert.sigma = TypeSigma::vertex();
  const FlagBasis basis = vertex_type_order3_basis();
  cert.flags = basis.flags();
  cert.q = from_ordered_convention(builtin_matrix(name), basis);
  cert.target = canonical_form(target);
  cert.bound = std::move(bound);
  cert.host_order = 5;
  return cert;
}

}  // namespace

Certificate builtin_certificate(std::string_view name) {
  if (name == "p3") return order3_certificate(name, graphs::path3(), ratio(4446, 10000));
  if (name == "c4") return order3_certificate(name, graphs::cycle4(), ratio(1104, 10000));
  if (name == "k12") return order3_certificate(name, graphs::out_star(), ratio(4644, 10000));
  if (name == "k2e1") {
    Certificate cert;
    cert.sigma = TypeSigma::vertex();
    cert.flags = enumerate_flags(cert.sigma, 2).flags();
    RationalMatrix q(3);
    const Rational c(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) q(i, j) = ((i == 0) != (j == 0)) ? Rational(-c) : c;
    cert.q = q;
    cert.target = canonical_form(graphs::arc_plus_vertex());
    cert.bound = Rational(3, 4);
    cert.host_order = 3;
    return cert;
  }
  throw std::invalid_argument("unknown builtin certificate '" + std::string(name) + "'");
}

}  // namespace flagcert
