#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "tgs/base.hpp"

namespace tgs {

// Exact rational arithmetic for weights and thresholds. Weight comparisons
// decide set membership, so no floating point is allowed anywhere near them.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }
  static Rat zero() { return Rat(); }
  static Rat one() { return Rat(1, 1); }

  void normalize() {
    if (den == 0) throw StructuralError("rational with zero denominator");
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

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den +
                 static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw StructuralError("rational overflow");
    return Rat(static_cast<long long>(n), static_cast<long long>(d));
  }

  bool in_unit_interval() const { return num >= 0 && *this <= Rat::one(); }

  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// Accepts "p/q", integers, and plain decimals ("0.6" -> 3/5), all exact.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw StructuralError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      long long n = std::stoll(s.substr(0, slash));
      long long d = std::stoll(s.substr(slash + 1));
      return Rat(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s), 1);
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (frac.size() > 15) throw StructuralError("decimal too long: " + s);
    bool neg = !whole.empty() && whole[0] == '-';
    long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    long long f = frac.empty() ? 0 : std::stoll(frac);
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    long long n = (neg ? -1 : 1) * ((neg ? -w : w) * scale + f);
    return Rat(n, scale);
  } catch (const std::invalid_argument&) {
    throw StructuralError("bad rational literal: " + s);
  } catch (const std::out_of_range&) {
    throw StructuralError("rational literal out of range: " + s);
  }
}

}  // namespace tgs
