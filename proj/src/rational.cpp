#include "pcl/rational.hpp"

#include <cctype>

#include "pcl/errors.hpp"

namespace pcl {

namespace {

BigInt parse_integer(const std::string& s, const std::string& whole) {
  if (s.empty()) throw InputError("not a number: '" + whole + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw InputError("not a number: '" + whole + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw InputError("not a number: '" + whole + "'");
  BigInt v(s.substr(i));
  return s[0] == '-' ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator: '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_integer(text, text));
  const std::string int_part = text.substr(0, dot);
  const std::string frac_part = text.substr(dot + 1);
  if (frac_part.empty()) return Rational(parse_integer(int_part, text));
  for (char c : frac_part)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("not a number: '" + text + "'");
  const bool negative = !int_part.empty() && int_part[0] == '-';
  BigInt ip = (int_part.empty() || int_part == "-" || int_part == "+")
                  ? BigInt(0)
                  : parse_integer(int_part, text);
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  BigInt frac(frac_part);
  if (negative) frac = -frac;
  return Rational(ip * scale + frac, scale);
}

std::string to_string(const Rational& r) { return r.str(); }

std::string to_string_with_denominator(const Rational& r, std::uint64_t den) {
  if (den == 0) return r.str();
  Rational scaled = r * den;
  if (denominator(scaled) != 1) return r.str();
  if (den == 1) return numerator(scaled).str();
  return numerator(scaled).str() + "/" + std::to_string(den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace pcl
