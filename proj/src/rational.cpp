#include "carnot/rational.hpp"

#include <cctype>
#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') ++i;
  if (i == s.size()) throw Error(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw Error(ErrorKind::ParseError, "bad number '" + std::string(whole) + "'");
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool negative = !ip.empty() && ip[0] == '-';
    std::string_view mag = (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ? ip.substr(1) : ip;
    BigInt whole = mag.empty() ? BigInt(0) : parse_integer(mag, text);
    BigInt frac = fp.empty() ? BigInt(0) : parse_integer(fp, text);
    if (!fp.empty() && (fp[0] == '+' || fp[0] == '-'))
      throw Error(ErrorKind::ParseError, "bad number '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Rational r = Rational(whole) + Rational(frac, scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53-bit mantissa scaled to an integer
  auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(m)};
  if (exponent > 0) {
    BigInt p = 1;
    p <<= exponent;
    r *= Rational(p);
  } else if (exponent < 0) {
    BigInt p = 1;
    p <<= -exponent;
    r /= Rational(p);
  }
  return r;
}

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
    return Rational(1) / pow(base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

bool exact_sqrt(const Rational& r, Rational& root) {
  if (r < 0) return false;
  BigInt n = numerator(r), d = denominator(r);
  BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return false;
  root = Rational(sn, sd);
  return true;
}

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::NotGraded: return "NotGraded";
    case ErrorKind::NotStratified: return "NotStratified";
    case ErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::NonpositiveLambda: return "NonpositiveLambda";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::BadWord: return "BadWord";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::InconsistentData: return "InconsistentData";
    case ErrorKind::RankDeficiency: return "RankDeficiency";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::CharacteristicPoint: return "CharacteristicPoint";
    case ErrorKind::BadGraph: return "BadGraph";
    case ErrorKind::OffTriangular: return "OffTriangular";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::FreeKeyInvalid: return "FreeKeyInvalid";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::EmptyShell: return "EmptyShell";
    case ErrorKind::NoTangentBall: return "NoTangentBall";
    case ErrorKind::NonInterior: return "NonInterior";
    case ErrorKind::StuckPath: return "StuckPath";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotPolynomial: return "NotPolynomial";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace carnot
