#include "covbound/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace covbound {

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(start), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-') {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  Rational r(BigInt(num), d);
  r.canonicalize();
  return r;
}

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 1) throw std::invalid_argument("digits must be positive");
  if (value == 0) return "0";
  Rational mag = abs(value);
  const bool negative = value < 0;

  if (mag.get_den() == 1) {
    std::string s = mag.get_num().get_str();
    if (static_cast<int>(s.size()) <= digits) return (negative ? "-" : "") + s;
  }

  // Find e with 10^e <= mag < 10^(e+1).
  long e = static_cast<long>(mag.get_num().get_str().size()) -
           static_cast<long>(mag.get_den().get_str().size());
  auto pow10 = [](long k) {
    Rational r(1);
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0) r = Rational(p);
    else r = Rational(BigInt(1), p);
    return r;
  };
  while (mag >= pow10(e + 1)) ++e;
  while (mag < pow10(e)) --e;

  Rational scaled = mag * pow10(digits - 1 - e);
  // round half away from zero
  BigInt mant = floor(scaled + Rational(1, 2));
  BigInt limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  if (mant >= limit) {
    mant /= 10;
    ++e;
  }
  std::string m = mant.get_str();
  while (m.size() > 1 && m.back() == '0') m.pop_back();

  std::string out = negative ? "-" : "";
  out += m[0];
  if (m.size() > 1) {
    out += '.';
    out += m.substr(1);
  }
  out += 'e';
  out += e < 0 ? '-' : '+';
  std::string ex = std::to_string(e < 0 ? -e : e);
  if (ex.size() < 2) ex.insert(0, "0");
  out += ex;
  return out;
}

HighFloat to_high_float(const Rational& value) {
  HighFloat num(value.get_num().get_str());
  HighFloat den(value.get_den().get_str());
  return num / den;
}

BigInt floor(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

BigInt ipow(long base, unsigned long exponent) {
  BigInt b(base);
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exponent);
  return r;
}

}  // namespace covbound
