#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace urykit {

/// Exact rational scalar backed by GMP. Always kept in canonical form
/// (positive denominator, gcd(|num|, den) = 1).
class Rat {
 public:
  Rat() = default;
  Rat(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(long num, long den);
  explicit Rat(mpq_class value);

  /// Parses "a", "-a" or "a/b". Non-canonical forms ("2/4") are accepted and
  /// normalized. Throws ParseError on anything else.
  static Rat parse(std::string_view text);

  [[nodiscard]] std::string str() const;
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] const mpq_class& get() const { return value_; }

  Rat& operator+=(const Rat& rhs);
  Rat& operator-=(const Rat& rhs);
  Rat& operator*=(const Rat& rhs);
  Rat& operator/=(const Rat& rhs);
  Rat operator-() const;

  friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
  friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
  friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
  friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rat& lhs, const Rat& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rat& lhs, const Rat& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

Rat abs(const Rat& r);
std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace urykit
