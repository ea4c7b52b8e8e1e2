#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace bv {

using Int = mpz_class;
using Rat = mpq_class;  // kept canonical (lowest terms, positive denominator) by GMP

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

// floor(p/q) as an exact integer
inline Int rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int rat_ceil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

// nearest integer; ties (x = k + 1/2) round down so that |x - round(x)| = 1/2 exactly
inline Int rat_round(const Rat& x) {
  Rat shifted = x + make_rat(1, 2);
  Int up = rat_ceil(shifted) - 1;  // largest k with k <= x + 1/2
  return up;
}

// x reduced mod 1 into [0,1)
inline Rat rat_mod1(const Rat& x) { return x - Rat(rat_floor(x)); }

// distance from x to the nearest integer, in [0, 1/2]
inline Rat rat_nearest_int_dist(const Rat& x) {
  Rat f = rat_mod1(x);
  Rat half = make_rat(1, 2);
  return f <= half ? f : Rat(1 - f);
}

inline Rat pow10_rat(long k) {
  Int p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k >= 0 ? k : -k));
  return k >= 0 ? Rat(p) : make_rat(Int(1), p);
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline std::string rat_to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Decimal rendering with explicit truncation, for human-facing report fields.
std::string rat_to_decimal(const Rat& x, int digits);

}  // namespace bv
