// Exact integer and rational helpers on top of GMP.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rankone {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q" or a bare integer "p". Decimal points are rejected.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (s.find_first_of(".eE") != std::string::npos)
    throw std::invalid_argument("rational must be written as p/q: " + s);
  auto slash = s.find('/');
  Int num, den(1);
  try {
    if (slash == std::string::npos) {
      num = Int(s, 10);
    } else {
      num = Int(s.substr(0, slash), 10);
      den = Int(s.substr(slash + 1), 10);
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
  return make_rational(num, den);
}

/// Always "p/q", also for integers ("3/1").
inline std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string format_int(const Int& z) { return z.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// floor(a / b) for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor(const Rational& q) {
  return floor_div(q.get_num(), q.get_den());
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int pow2(unsigned long bits) {
  Int p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, bits);
  return p;
}

inline bool fits_u64(const Int& z) {
  return z >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Int& z) {
  if (!fits_u64(z)) throw std::overflow_error("integer does not fit in 64 bits: " + z.get_str());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
  return out;
}

inline Int from_u64(std::uint64_t v) {
  Int z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return z;
}

inline Int from_i64(std::int64_t v) {
  if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
  // -(v+1) avoids overflow on INT64_MIN
  return -from_u64(static_cast<std::uint64_t>(-(v + 1))) - 1;
}

}  // namespace rankone
