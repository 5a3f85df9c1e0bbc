#include "cvn/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cvn {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational");
  s = s.substr(first, last - first + 1);

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational: " + s);
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (negative) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    for (char c : whole + frac)
      if (c < '0' || c > '9') throw std::invalid_argument("bad rational: " + s);
    mpz_class num(whole + frac);
    mpz_class den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }

  Rational q;
  try {
    q = Rational(s, 10);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational: " + s);
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

double log_of(const Rational& q) {
  // mpq_get_d loses range for huge operands; go through the parts.
  long exp_num = 0;
  long exp_den = 0;
  double mant_num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  double mant_den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log(mant_num / mant_den) + static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

std::string format_decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

Rational pow(const Rational& q, unsigned k) {
  Rational r(1);
  for (unsigned i = 0; i < k; ++i) r *= q;
  return r;
}

}  // namespace cvn
