#include "ruzsa/rational.hpp"

#include <algorithm>

namespace ruzsa {

namespace {

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::string to_string(Int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work with the negative magnitude so INT128_MIN does not overflow.
  Int128 v = negative ? value : -value;
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Int128 isqrt(Int128 value) {
  if (value < 0) throw std::domain_error("isqrt of a negative number");
  if (value < 2) return value;
  // Newton iteration from an overestimate.
  Int128 x = value;
  Int128 y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + value / x) / 2;
  }
  return x;
}

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("128-bit multiplication overflow");
  return out;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("128-bit addition overflow");
  return out;
}

Rational::Rational(Int128 num) : num_(num), den_(1) {}

Rational::Rational(Int128 num, Int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Int128 g = gcd128(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

Rational operator+(const Rational& a, const Rational& b) {
  const Int128 g = gcd128(a.den_, b.den_);
  const Int128 lhs = checked_mul(a.num_, b.den_ / g);
  const Int128 rhs = checked_mul(b.num_, a.den_ / g);
  return Rational(checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  const Int128 g1 = gcd128(a.num_, b.den_);
  const Int128 g2 = gcd128(b.num_, a.den_);
  const Int128 n1 = g1 == 0 ? a.num_ : a.num_ / g1;
  const Int128 d2 = g1 == 0 ? b.den_ : b.den_ / g1;
  const Int128 n2 = g2 == 0 ? b.num_ : b.num_ / g2;
  const Int128 d1 = g2 == 0 ? a.den_ : a.den_ / g2;
  return Rational(checked_mul(n1, n2), checked_mul(d1, d2));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Int128 lhs = checked_mul(a.num_, b.den_);
  const Int128 rhs = checked_mul(b.num_, a.den_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return to_string(num_);
  return to_string(num_) + "/" + to_string(den_);
}

std::string Rational::decimal(int digits) const {
  const bool negative = num_ < 0;
  const Int128 mag = abs128(num_);
  std::string out = (negative ? "-" : "") + to_string(mag / den_);
  Int128 rem = mag % den_;
  if (rem == 0 || digits <= 0) return out;
  std::string frac;
  for (int i = 0; i < digits && rem != 0; ++i) {
    rem *= 10;
    frac.push_back(static_cast<char>('0' + static_cast<int>(rem / den_)));
    rem %= den_;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace ruzsa
