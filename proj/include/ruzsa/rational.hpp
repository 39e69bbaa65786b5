#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ruzsa {

using Int128 = __int128;

/// Decimal rendering of a 128-bit signed integer.
std::string to_string(Int128 value);

/// Floor of the square root of a nonnegative integer.
Int128 isqrt(Int128 value);

/// Multiplication that throws std::overflow_error instead of wrapping.
Int128 checked_mul(Int128 a, Int128 b);
Int128 checked_add(Int128 a, Int128 b);

/// Exact rational number with a 128-bit numerator and a positive denominator,
/// always kept in lowest terms. Arithmetic throws on overflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(Int128 num);  // NOLINT(google-explicit-constructor)
  Rational(Int128 num, Int128 den);

  Int128 num() const { return num_; }
  Int128 den() const { return den_; }

  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;
  /// Decimal expansion truncated toward zero after `digits` places, with
  /// trailing zeros removed ("79.2", "95.28", "-0.5").
  std::string decimal(int digits = 6) const;

 private:
  Int128 num_ = 0;
  Int128 den_ = 1;
};

}  // namespace ruzsa
