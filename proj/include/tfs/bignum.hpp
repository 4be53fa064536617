#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace tfs {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int pow2(unsigned e) { return Int(1) << e; }

// Floor division toward minus infinity; b > 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int rat_floor(const Rat& r) {
  return floor_div(numerator(r), denominator(r));
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

// Bits needed to represent v >= 0 (bit_len(0) = 0).
inline unsigned bit_len(const Int& v) {
  Int x = v < 0 ? Int(-v) : v;
  unsigned n = 0;
  while (x > 0) {
    ++n;
    x >>= 1;
  }
  return n;
}

// ceil(log2(v)) for v >= 1.
inline unsigned ceil_log2(const Int& v) {
  unsigned n = bit_len(v);
  if (n == 0) return 0;
  bool power = (v & (v - 1)) == 0;
  return power ? n - 1 : n;
}

// An integer bound extended with +infinity (used for octagon entries and
// synthesized constants) or -infinity (unreachable maxima).
struct ExtInt {
  enum Kind { FINITE, PLUS_INF, MINUS_INF } kind = FINITE;
  Int value;

  ExtInt() = default;
  ExtInt(Int v) : kind(FINITE), value(std::move(v)) {}
  static ExtInt plus_inf() { return ExtInt(PLUS_INF, Int(0)); }
  static ExtInt minus_inf() { return ExtInt(MINUS_INF, Int(0)); }

  bool finite() const { return kind == FINITE; }
  bool is_plus_inf() const { return kind == PLUS_INF; }
  bool is_minus_inf() const { return kind == MINUS_INF; }

  friend bool operator==(const ExtInt& a, const ExtInt& b) {
    if (a.kind != b.kind) return false;
    return a.kind != FINITE || a.value == b.value;
  }
  friend bool operator<(const ExtInt& a, const ExtInt& b) {
    if (a.kind == MINUS_INF) return b.kind != MINUS_INF;
    if (a.kind == PLUS_INF) return false;
    if (b.kind == PLUS_INF) return true;
    if (b.kind == MINUS_INF) return false;
    return a.value < b.value;
  }
  friend bool operator<=(const ExtInt& a, const ExtInt& b) { return !(b < a); }

  // Addition saturates at +inf; adding opposite infinities is a caller bug.
  friend ExtInt operator+(const ExtInt& a, const ExtInt& b) {
    if (a.kind == PLUS_INF || b.kind == PLUS_INF) return plus_inf();
    if (a.kind == MINUS_INF || b.kind == MINUS_INF) return minus_inf();
    return ExtInt(a.value + b.value);
  }

  std::string str() const {
    if (kind == PLUS_INF) return "+inf";
    if (kind == MINUS_INF) return "-inf";
    return value.str();
  }

 private:
  ExtInt(Kind k, Int v) : kind(k), value(std::move(v)) {}
};

inline ExtInt min(const ExtInt& a, const ExtInt& b) { return a < b ? a : b; }
inline ExtInt max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }

}  // namespace tfs
