#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "randeq/errors.hpp"

namespace randeq {

/// Exact count of lattice points / equations. 128 bits covers (2r+1)^(k+m)
/// up to ~3.4e38; anything larger raises ResourceError instead of wrapping.
__extension__ typedef unsigned __int128 Count;
__extension__ typedef __int128 SignedWide;

/// Group-element coordinates and exponents.
using Int = std::int64_t;

namespace detail {

template <typename T>
T checked_mul(T a, T b) {
  T out;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError("integer overflow in multiplication");
  return out;
}

template <typename T>
T checked_add(T a, T b) {
  T out;
  if (__builtin_add_overflow(a, b, &out)) throw ResourceError("integer overflow in addition");
  return out;
}

template <typename T>
T checked_sub(T a, T b) {
  T out;
  if (__builtin_sub_overflow(a, b, &out)) throw ResourceError("integer overflow in subtraction");
  return out;
}

inline Int narrow(SignedWide v) {
  if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
    throw ResourceError("coordinate exceeds 64-bit range");
  return static_cast<Int>(v);
}

}  // namespace detail

/// base^exp with overflow detection.
inline Count ipow(Count base, unsigned exp) {
  Count result = 1;
  for (unsigned i = 0; i < exp; ++i) result = detail::checked_mul(result, base);
  return result;
}

inline SignedWide ipow_signed(SignedWide base, unsigned exp) {
  SignedWide result = 1;
  for (unsigned i = 0; i < exp; ++i) result = detail::checked_mul(result, base);
  return result;
}

inline std::string to_string(Count v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

inline std::string to_string(SignedWide v) {
  if (v < 0) return "-" + to_string(static_cast<Count>(-(v + 1)) + 1);
  return to_string(static_cast<Count>(v));
}

inline double to_double(Count v) { return static_cast<long double>(v); }

/// Exact ratio of two wide counts as a double.
inline double ratio(Count num, Count den) {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

/// Floor division for signed integers (rounds toward negative infinity).
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Non-negative remainder in [0, |b|).
inline Int mod_floor(Int a, Int b) {
  Int m = a % b;
  if (m < 0) m += (b < 0 ? -b : b);
  return m;
}

}  // namespace randeq
