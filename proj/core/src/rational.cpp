#include "flagcert/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace flagcert {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("malformed rational: empty string");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    Integer den(std::string(den_text), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    Integer exp_z = parse_integer(text.substr(e + 1), text);
    if (!exp_z.fits_slong_p() || abs(exp_z) > 10000)
      throw std::invalid_argument("exponent out of range in '" + std::string(text) + "'");
    exponent = exp_z.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part)))
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  digits.append(int_part);
  digits.append(frac_part);
  Integer num(digits, 10);
  if (negative) num = -num;
  exponent -= static_cast<long>(frac_part.size());
  Integer pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(num, pow10) : Rational(num * pow10);
  r.canonicalize();
  return r;
}

Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal_string(const Rational& value, int significant) {
  if (significant < 1) significant = 1;
  if (value == 0) return "0";
  mpf_class f(value, 64 + 4 * static_cast<mp_bitcnt_t>(significant));
  mp_exp_t exp = 0;
  char* raw = mpf_get_str(nullptr, &exp, 10, static_cast<size_t>(significant), f.get_mpf_t());
  std::string digits(raw);
  void (*free_fn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(raw, std::char_traits<char>::length(raw) + 1);

  bool negative = !digits.empty() && digits.front() == '-';
  if (negative) digits.erase(0, 1);
  // digits = d1 d2 ... with value 0.d1d2... * 10^exp
  std::string out = negative ? "-" : "";
  const long e10 = static_cast<long>(exp) - 1;
  const long n = static_cast<long>(digits.size());
  if (e10 >= -6 && e10 < significant) {
    if (e10 < 0) {
      out += "0." + std::string(static_cast<std::size_t>(-e10 - 1), '0') + digits;
    } else if (e10 + 1 >= n) {
      out += digits + std::string(static_cast<std::size_t>(e10 + 1 - n), '0');
    } else {
      out += digits.substr(0, static_cast<std::size_t>(e10 + 1)) + "." + digits.substr(static_cast<std::size_t>(e10 + 1));
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(e10);
  return out;
}

double to_double(const Rational& value) {
  // get_d truncates; step to whichever neighbour is nearest.
  const double t = value.get_d();
  if (!std::isfinite(t)) return t;
  double best = t;
  Rational best_err = abs(Rational(t) - value);
  for (double n : {std::nextafter(t, -HUGE_VAL), std::nextafter(t, HUGE_VAL)}) {
    if (!std::isfinite(n)) continue;
    const Rational err = abs(Rational(n) - value);
    if (err < best_err) best = n, best_err = err;
  }
  return best;
}

Rational round_to_denominator(double value, const Integer& denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot rationalize a non-finite value");
  // Exact conversion of the double, then exact rounding.
  Rational exact(value);
  Rational scaled = exact * denominator;
  Integer twice = (scaled.get_num() * 2 + (scaled >= 0 ? scaled.get_den() : Integer(-scaled.get_den())));
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Integer(scaled.get_den() * 2).get_mpz_t());
  Rational r(q, denominator);
  r.canonicalize();
  return r;
}

Rational ceil_with_bounded_denominator(const Rational& value, std::uint32_t max_denominator) {
  if (max_denominator == 0) throw std::invalid_argument("max_denominator must be positive");
  Rational best;
  bool have = false;
  for (std::uint32_t q = 1; q <= max_denominator; ++q) {
    Integer scaled_num = value.get_num() * q;
    Integer p;
    mpz_cdiv_q(p.get_mpz_t(), scaled_num.get_mpz_t(), value.get_den().get_mpz_t());
    Rational candidate(p, q);
    candidate.canonicalize();
    if (!have || candidate < best) {
      best = candidate;
      have = true;
    }
  }
  return best;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer falling_factorial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) r *= (n - i);
  return r;
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace flagcert
