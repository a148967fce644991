#include "secdist/rational.hpp"

#include "secdist/errors.hpp"

#include <cctype>

namespace secdist {

namespace {

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!valid_integer_token(num)) {
    fail(Errc::parse_error, "not a rational: '" + std::string(text) + "'");
  }
  if (slash == std::string_view::npos) {
    return Rational(BigInt(std::string(num)));
  }
  std::string_view den = text.substr(slash + 1);
  if (!valid_integer_token(den) || den.front() == '-') {
    fail(Errc::parse_error, "not a rational: '" + std::string(text) + "'");
  }
  BigInt d{std::string(den)};
  if (d == 0) {
    fail(Errc::parse_error, "zero denominator: '" + std::string(text) + "'");
  }
  return Rational(BigInt(std::string(num)), d);
}

std::string format_rational(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

} // namespace secdist
