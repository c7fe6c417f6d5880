#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gfa {

// Exact rational over int64, always stored normalized (gcd 1, positive
// denominator). Intermediate products go through __int128; results that do
// not fit back into int64 throw std::overflow_error rather than wrapping.
// Comparisons are exact cross-multiplications, never via double.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  // Accepts "3", "-7/2", "0.25", "1e-2". Throws std::invalid_argument.
  static Rational parse(const std::string& text);

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;  // "p/q", or just "p" when integral

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return cmp(a, b) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  static int cmp(const Rational& a, const Rational& b);
  static std::int64_t checked(__int128 v);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace gfa
