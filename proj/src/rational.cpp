#include "semaudit/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace semaudit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer pow10(int exponent) {
  Integer out = 1;
  for (int i = 0; i < exponent; ++i) out *= 10;
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 4) {
      throw std::invalid_argument("bad exponent in number");
    }
    exponent = std::stoi(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string_view whole = text;
  std::string_view frac;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    whole = text.substr(0, dot);
    frac = text.substr(dot + 1);
  }
  if (whole.empty() && frac.empty()) throw std::invalid_argument("empty number");
  if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
    throw std::invalid_argument("malformed decimal");
  }
  // Leading zeros would make GMP read the digits as octal.
  std::string joined = std::string(whole) + std::string(frac);
  joined.erase(0, std::min(joined.find_first_not_of('0'), joined.size() - 1));
  Integer digits(joined);
  Rational out(digits, pow10(static_cast<int>(frac.size())));
  if (exponent > 0) out *= Rational(pow10(exponent));
  if (exponent < 0) out /= Rational(pow10(-exponent));
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(trim(text.substr(0, slash)));
    Rational den = parse_decimal(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return num / den;
  }
  return parse_decimal(text);
}

std::string to_exact_string(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational round_half_even(const Rational& value, int decimals) {
  const Integer scale = pow10(decimals);
  const Rational scaled = value * Rational(scale);
  const Integer num = boost::multiprecision::numerator(scaled);
  const Integer den = boost::multiprecision::denominator(scaled);
  // floor division that is correct for negatives
  Integer q = num / den;
  Integer r = num % den;
  if (r != 0 && num < 0) {
    q -= 1;
    r += den;
  }
  const Integer twice = 2 * r;
  if (twice > den || (twice == den && q % 2 != 0)) q += 1;
  return Rational(q, scale);
}

std::string to_fixed(const Rational& value, int decimals) {
  const Rational rounded = round_half_even(value, decimals);
  const Integer scaled = boost::multiprecision::numerator(rounded * Rational(pow10(decimals)));
  const bool negative = scaled < 0;
  std::string digits = (negative ? Integer(-scaled) : scaled).str();
  if (decimals > 0) {
    if (static_cast<int>(digits.size()) <= decimals) {
      digits.insert(0, decimals + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - decimals, ".");
  }
  return negative ? "-" + digits : digits;
}

std::string to_smt_constant(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  const Integer mag = num < 0 ? Integer(-num) : num;
  std::string body = den == 1 ? mag.str() : "(/ " + mag.str() + " " + den.str() + ")";
  return num < 0 ? "(- " + body + ")" : body;
}

}  // namespace semaudit
