#include "urykit/rational.hpp"

#include <cctype>
#include <ostream>

#include "urykit/errors.hpp"

namespace urykit {
namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rat::Rat(long num, long den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rat::Rat(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rat Rat::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("malformed rational literal '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rat(mpq_class(n, d));
}

std::string Rat::str() const { return value_.get_str(10); }

Rat& Rat::operator+=(const Rat& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rat& Rat::operator-=(const Rat& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rat& Rat::operator*=(const Rat& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rat& Rat::operator/=(const Rat& rhs) {
  if (rhs.is_zero()) throw ValidationError("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rat Rat::operator-() const { return Rat(mpq_class(-value_)); }

Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace urykit
