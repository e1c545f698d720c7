#include "sahr/rational.hpp"

#include <cctype>
#include <cmath>

#include "sahr/error.hpp"

namespace sahr {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) fail(ErrorKind::ParseError, "malformed number '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) fail(ErrorKind::ParseError, "empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), s);
    std::string_view den_text = trim(s.substr(slash + 1));
    if (!all_digits(den_text)) fail(ErrorKind::ParseError, "malformed denominator in '" + std::string(s) + "'");
    Integer den(std::string(den_text), 10);
    if (den == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  // Decimal with optional exponent.
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer ez = parse_integer(s.substr(e + 1), text);
    if (!ez.fits_slong_p() || abs(ez) > 100000) fail(ErrorKind::ParseError, "exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      fail(ErrorKind::ParseError, "malformed number '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) fail(ErrorKind::ParseError, "malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational q{Integer(digits, 10)};
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0)
    q /= scale;
  else
    q *= scale;
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double x) { return Rational(x); }

}  // namespace sahr
