#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cuspflat {

// Exact rational arithmetic for the critical-exponent formulas. Inputs are
// desk-scale (exponents like 3/2, grid betas like 49/10), so int64 never
// comes close to overflow here.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::domain_error("Rational: division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(Rational a, Rational b) { return !(a == b); }
  friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
  friend bool operator>(Rational a, Rational b) { return b < a; }
  friend bool operator<=(Rational a, Rational b) { return !(b < a); }
  friend bool operator>=(Rational a, Rational b) { return !(a < b); }
};

// Parses "n", "a/b", or a plain decimal like "4.9" (converted exactly).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const long long n = std::stoll(text.substr(0, slash));
    const long long d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("parse_rational: too many decimals: " + text);
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !whole.empty() && whole[0] == '-';
    const long long w = (whole.empty() || whole == "-" || whole == "+") ? 0 : std::stoll(whole);
    const long long f = frac.empty() ? 0 : std::stoll(frac);
    long long n = (w < 0 ? -w : w) * den + f;
    if (neg || w < 0) n = -n;
    return Rational(n, den);
  }
  return Rational(std::stoll(text), 1);
}

// A rational extended with +infinity; finite exponents stay exact.
struct ExtendedRational {
  bool infinite = false;
  Rational value;

  ExtendedRational() = default;
  ExtendedRational(Rational r) : infinite(false), value(r) {}
  ExtendedRational(long long n) : infinite(false), value(n) {}

  static ExtendedRational inf() {
    ExtendedRational e;
    e.infinite = true;
    return e;
  }

  bool is_finite() const { return !infinite; }

  double to_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value.to_double();
  }

  std::string to_string() const { return infinite ? "inf" : value.to_string(); }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
};

// Accepts "inf" for the infinite exponent, otherwise parse_rational rules.
inline ExtendedRational parse_extended(const std::string& text) {
  if (text == "inf") return ExtendedRational::inf();
  return ExtendedRational(parse_rational(text));
}

}  // namespace cuspflat
