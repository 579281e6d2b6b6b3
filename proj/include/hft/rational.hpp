#pragma once

#include <compare>
#include <cstdlib>
#include <numeric>
#include <string>

#include "hft/errors.hpp"

namespace hft {

// Exact rational numbers for gradings. Values stay tiny (denominators divide
// p <= a few dozen), so long long is plenty.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw BadInput("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  Rational operator-() const { return Rational(-num, den); }
  Rational& operator+=(Rational o) { return *this = *this + o; }
  Rational& operator-=(Rational o) { return *this = *this - o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(Rational a, Rational b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

// Canonical form used in all JSON output: reduced "num/den" with den > 0.
inline std::string to_string(Rational r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

// Accepts "3", "-3", "3/5", "-3/5". Whitespace is not tolerated.
inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw BadInput("empty rational literal");
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t pos = 0;
      long long n = std::stoll(s, &pos);
      if (pos != s.size()) throw BadInput("trailing junk in rational: " + s);
      return Rational(n);
    }
    std::size_t pos = 0;
    long long n = std::stoll(s.substr(0, slash), &pos);
    if (pos != slash) throw BadInput("trailing junk in rational: " + s);
    long long d = std::stoll(s.substr(slash + 1), &pos);
    if (pos != s.size() - slash - 1) throw BadInput("trailing junk in rational: " + s);
    return Rational(n, d);
  } catch (const std::invalid_argument&) {
    throw BadInput("unparsable rational: " + s);
  } catch (const std::out_of_range&) {
    throw BadInput("rational out of range: " + s);
  }
}

}  // namespace hft
