#include "gfa/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <numeric>

namespace gfa {

namespace {

std::int64_t gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return static_cast<std::int64_t>(a);
}

}  // namespace

std::int64_t Rational::checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  if (den < 0) {
    if (num == INT64_MIN || den == INT64_MIN) throw std::overflow_error("rational overflow");
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::operator-() const {
  if (num_ == INT64_MIN) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * o.den_;
  std::int64_t g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked(n);
  den_ = checked(d);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  __int128 n = static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * o.den_;
  std::int64_t g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked(n);
  den_ = checked(d);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  __int128 n = static_cast<__int128>(num_) * o.num_;
  __int128 d = static_cast<__int128>(den_) * o.den_;
  std::int64_t g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked(n);
  den_ = checked(d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::invalid_argument("rational: division by zero");
  __int128 n = static_cast<__int128>(num_) * o.den_;
  __int128 d = static_cast<__int128>(den_) * o.num_;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked(n);
  den_ = checked(d);
  return *this;
}

int Rational::cmp(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("rational: empty string");

  auto parse_i64 = [](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw std::invalid_argument("rational: bad integer '" + std::string(s) + "'");
    return v;
  };

  std::string_view sv(text);
  if (auto slash = sv.find('/'); slash != std::string_view::npos) {
    return Rational(parse_i64(sv.substr(0, slash)), parse_i64(sv.substr(slash + 1)));
  }

  if (sv.find('.') != std::string_view::npos || sv.find('e') != std::string_view::npos ||
      sv.find('E') != std::string_view::npos) {
    // Decimal form: mantissa digits over a power of ten, exact.
    bool neg = false;
    std::size_t i = 0;
    if (sv[i] == '+' || sv[i] == '-') {
      neg = sv[i] == '-';
      ++i;
    }
    __int128 mant = 0;
    int frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < sv.size() && sv[i] != 'e' && sv[i] != 'E'; ++i) {
      if (sv[i] == '.') {
        if (seen_dot) throw std::invalid_argument("rational: bad number '" + text + "'");
        seen_dot = true;
      } else if (sv[i] >= '0' && sv[i] <= '9') {
        mant = mant * 10 + (sv[i] - '0');
        if (mant > INT64_MAX) throw std::overflow_error("rational overflow");
        if (seen_dot) ++frac_digits;
        seen_digit = true;
      } else {
        throw std::invalid_argument("rational: bad number '" + text + "'");
      }
    }
    if (!seen_digit) throw std::invalid_argument("rational: bad number '" + text + "'");
    int exp10 = 0;
    if (i < sv.size()) exp10 = static_cast<int>(parse_i64(sv.substr(i + 1)));
    exp10 -= frac_digits;
    Rational r(neg ? -static_cast<std::int64_t>(mant) : static_cast<std::int64_t>(mant), 1);
    Rational ten(10, 1);
    for (int k = 0; k < exp10; ++k) r *= ten;
    for (int k = 0; k > exp10; --k) r /= ten;
    return r;
  }

  return Rational(parse_i64(sv), 1);
}

}  // namespace gfa
