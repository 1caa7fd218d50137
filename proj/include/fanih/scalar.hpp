#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace fanih {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Invariant: den > 0 and gcd(num, den) == 1.
struct Rational {
  BigInt num{0};
  BigInt den{1};

  Rational() = default;
  Rational(long long v) : num(v), den(1) {}
  Rational(BigInt v) : num(std::move(v)), den(1) {}
  Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  bool is_zero() const { return num == 0; }
  int sign() const { return num == 0 ? 0 : (num < 0 ? -1 : 1); }

  friend Rational operator+(const Rational& x, const Rational& y) {
    return Rational(x.num * y.den + y.num * x.den, x.den * y.den);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return Rational(x.num * y.den - y.num * x.den, x.den * y.den);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return Rational(x.num * y.num, x.den * y.den);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.num == 0) throw std::domain_error("rational division by zero");
    return Rational(x.num * y.den, x.den * y.num);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num = -r.num;
    return r;
  }
  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }
  Rational& operator/=(const Rational& y) { return *this = *this / y; }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num == y.num && x.den == y.den;
  }
  friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
  friend bool operator<(const Rational& x, const Rational& y) {
    return (x - y).sign() < 0;
  }

  std::string to_string() const {
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
  }
};

inline bool is_squarefree(long long d) {
  for (long long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

// Element of Q or of a real quadratic field Q(sqrt(d)).
// value = a + b*sqrt(d); d == 0 encodes a plain rational (then b == 0).
// Invariant: d == 0, or d >= 2 squarefree; b == 0 forces d == 0.
// All comparisons are exact; no floating point anywhere.
struct FieldScalar {
  Rational a;
  Rational b;
  long long d{0};

  FieldScalar() = default;
  FieldScalar(long long v) : a(v) {}
  FieldScalar(Rational v) : a(std::move(v)) {}

  static FieldScalar quadratic(Rational ra, Rational rb, long long rd) {
    FieldScalar s;
    s.a = std::move(ra);
    if (rb.is_zero()) return s;
    if (rd < 2 || !is_squarefree(rd))
      throw std::invalid_argument("radicand must be squarefree and at least 2");
    s.b = std::move(rb);
    s.d = rd;
    return s;
  }

  bool is_rational() const { return d == 0; }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }

  // Exact sign of a + b*sqrt(d). With mixed signs, compare a^2 against b^2*d.
  int sign() const {
    if (b.is_zero()) return a.sign();
    if (a.is_zero()) return b.sign();
    int sa = a.sign(), sb = b.sign();
    if (sa == sb) return sa;
    Rational cmp = a * a - b * b * Rational(d);
    return cmp.sign() == 0 ? 0 : cmp.sign() * sa;
  }

  static long long common_radicand(const FieldScalar& x, const FieldScalar& y) {
    if (x.d == 0) return y.d;
    if (y.d == 0 || x.d == y.d) return x.d;
    throw std::invalid_argument("mixed radicands in one expression");
  }

  friend FieldScalar operator+(const FieldScalar& x, const FieldScalar& y) {
    FieldScalar r;
    r.a = x.a + y.a;
    r.b = x.b + y.b;
    r.d = common_radicand(x, y);
    if (r.b.is_zero()) r.d = 0;
    return r;
  }
  friend FieldScalar operator-(const FieldScalar& x, const FieldScalar& y) {
    FieldScalar r;
    r.a = x.a - y.a;
    r.b = x.b - y.b;
    r.d = common_radicand(x, y);
    if (r.b.is_zero()) r.d = 0;
    return r;
  }
  friend FieldScalar operator*(const FieldScalar& x, const FieldScalar& y) {
    long long rd = common_radicand(x, y);
    FieldScalar r;
    r.a = x.a * y.a + x.b * y.b * Rational(rd);
    r.b = x.a * y.b + x.b * y.a;
    r.d = r.b.is_zero() ? 0 : rd;
    return r;
  }
  FieldScalar inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (b.is_zero()) {
      FieldScalar r;
      r.a = Rational(1) / a;
      return r;
    }
    // norm = a^2 - d b^2 is nonzero: d is not a rational square.
    Rational nrm = a * a - b * b * Rational(d);
    FieldScalar r;
    r.a = a / nrm;
    r.b = -b / nrm;
    r.d = r.b.is_zero() ? 0 : d;
    return r;
  }
  friend FieldScalar operator/(const FieldScalar& x, const FieldScalar& y) {
    return x * y.inverse();
  }
  FieldScalar operator-() const {
    FieldScalar r = *this;
    r.a = -r.a;
    r.b = -r.b;
    return r;
  }
  FieldScalar& operator+=(const FieldScalar& y) { return *this = *this + y; }
  FieldScalar& operator-=(const FieldScalar& y) { return *this = *this - y; }
  FieldScalar& operator*=(const FieldScalar& y) { return *this = *this * y; }
  FieldScalar& operator/=(const FieldScalar& y) { return *this = *this / y; }

  friend bool operator==(const FieldScalar& x, const FieldScalar& y) {
    return x.d == y.d && x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const FieldScalar& x, const FieldScalar& y) { return !(x == y); }
  friend bool operator<(const FieldScalar& x, const FieldScalar& y) {
    return (x - y).sign() < 0;
  }
  friend bool operator<=(const FieldScalar& x, const FieldScalar& y) {
    return (x - y).sign() <= 0;
  }

  std::string to_string() const {
    if (b.is_zero()) return a.to_string();
    std::string s = a.to_string();
    Rational babs = b.sign() < 0 ? -b : b;
    s += (b.sign() < 0 ? "-" : "+");
    s += babs.to_string() + "*sqrt(" + std::to_string(d) + ")";
    return s;
  }
};

namespace detail {

inline Rational parse_rational_token(const std::string& s, size_t& pos) {
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = s[pos] == '-';
    ++pos;
  }
  size_t digits = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == digits) throw std::invalid_argument("expected number in scalar '" + s + "'");
  BigInt num(s.substr(digits, pos - digits));
  if (neg) num = -num;
  BigInt den(1);
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    size_t dstart = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == dstart) throw std::invalid_argument("expected denominator in scalar '" + s + "'");
    den = BigInt(s.substr(dstart, pos - dstart));
  }
  return Rational(num, den);
}

}  // namespace detail

// Accepted forms, no spaces: "p", "p/q", and "A+B*sqrt(D)" / "A-B*sqrt(D)"
// where A and B are rationals as above. Round-trips with to_string exactly.
inline FieldScalar parse_scalar(const std::string& s) {
  size_t pos = 0;
  Rational a = detail::parse_rational_token(s, pos);
  if (pos == s.size()) return FieldScalar(a);
  if (s[pos] != '+' && s[pos] != '-')
    throw std::invalid_argument("malformed scalar '" + s + "'");
  Rational b = detail::parse_rational_token(s, pos);
  const std::string tail = "*sqrt(";
  if (s.compare(pos, tail.size(), tail) != 0)
    throw std::invalid_argument("malformed scalar '" + s + "'");
  pos += tail.size();
  size_t dstart = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == dstart || pos >= s.size() || s[pos] != ')' || pos + 1 != s.size())
    throw std::invalid_argument("malformed scalar '" + s + "'");
  long long d = std::stoll(s.substr(dstart, pos - dstart));
  return FieldScalar::quadratic(a, b, d);
}

}  // namespace fanih
