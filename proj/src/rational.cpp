#include "gkz/rational.hpp"

#include "gkz/error.hpp"

#include <cctype>

namespace gkz {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::LowerDimensionalPolytope: return "LowerDimensionalPolytope";
    case ErrorKind::NonIntegerVolume: return "NonIntegerVolume";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::VariableMismatch: return "VariableMismatch";
    case ErrorKind::SaturationBudgetExceeded: return "SaturationBudgetExceeded";
    case ErrorKind::DegreeViolation: return "DegreeViolation";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NoInteriorMonomial: return "NoInteriorMonomial";
    case ErrorKind::SingularOnContour: return "SingularOnContour";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::DivergentAtBoundary: return "DivergentAtBoundary";
    case ErrorKind::PoleNearPath: return "PoleNearPath";
    case ErrorKind::MultipleRoot: return "MultipleRoot";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw Error(ErrorKind::InvalidArgument, "bad rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw Error(ErrorKind::InvalidArgument, "bad rational '" + std::string(whole) + "'");
  Integer value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw Error(ErrorKind::InvalidArgument, "bad rational '" + std::string(whole) + "'");
    value = value * 10 + (text[i] - '0');
  }
  return negative ? Integer(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto whole = trim(text);
  const auto slash = whole.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(whole, whole));
  Integer num = parse_integer(trim(whole.substr(0, slash)), whole);
  Integer den = parse_integer(trim(whole.substr(slash + 1)), whole);
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(whole) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_integer(const Rational& value) { return boost::multiprecision::denominator(value) == 1; }

long double to_long_double(const Rational& value) {
  return value.convert_to<long double>();
}

Integer binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer result = 1;
  for (long long i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

Integer factorial(long long n) {
  Integer result = 1;
  for (long long i = 2; i <= n; ++i) result *= i;
  return result;
}

}  // namespace gkz
