#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "bv/rational.hpp"

namespace bv {

// Closed interval with exact rational endpoints. All arithmetic here is exact,
// so intervals only widen when a genuinely irrational quantity is enclosed.
struct Interval {
  Rat lo;
  Rat hi;

  Interval() : lo(0), hi(0) {}
  explicit Interval(const Rat& x) : lo(x), hi(x) {}
  Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  }

  static Interval exact(const Rat& x) { return Interval(x); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  // certified comparisons: true only when the relation holds for every member
  bool certainly_lt(const Rat& x) const { return hi < x; }
  bool certainly_gt(const Rat& x) const { return lo > x; }
  bool certainly_ge(const Rat& x) const { return lo >= x; }
  bool certainly_le(const Rat& x) const { return hi <= x; }
};

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo + b.lo, a.hi + b.hi);
}
inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo - b.hi, a.hi - b.lo);
}
inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator*(const Interval& a, const Interval& b) {
  Rat c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rat lo = c[0], hi = c[0];
  for (int i = 1; i < 4; ++i) {
    if (c[i] < lo) lo = c[i];
    if (c[i] > hi) hi = c[i];
  }
  return Interval(lo, hi);
}

inline Interval operator*(const Rat& a, const Interval& b) { return Interval(a) * b; }
inline Interval operator+(const Rat& a, const Interval& b) { return Interval(a) + b; }
inline Interval operator+(const Interval& a, const Rat& b) { return a + Interval(b); }
inline Interval operator-(const Rat& a, const Interval& b) { return Interval(a) - b; }
inline Interval operator-(const Interval& a, const Rat& b) { return a - Interval(b); }

// Division refuses when the divisor encloses 0 (conditional quantities are undefined there).
inline Interval interval_div(const Interval& a, const Interval& b) {
  if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval_div: divisor encloses 0");
  Rat c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  Rat lo = c[0], hi = c[0];
  for (int i = 1; i < 4; ++i) {
    if (c[i] < lo) lo = c[i];
    if (c[i] > hi) hi = c[i];
  }
  return Interval(lo, hi);
}

inline Interval interval_abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return Interval(Rat(0), std::max(Rat(-a.lo), a.hi));
}

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline Interval interval_min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}
inline Interval interval_max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

// Enclosure of the distance to the nearest integer; result lies in [0, 1/2].
Interval nearest_int_dist(const Interval& x);

// Outward rounding onto the grid step*Z. Keeps denominators bounded after
// transcendental evaluations, at the cost of widening by at most 2*step.
Interval coarsen(const Interval& x, const Rat& step);

struct ComplexInterval {
  Interval re;
  Interval im;

  ComplexInterval() = default;
  explicit ComplexInterval(int v) : re(Interval(Rat(v))), im(Interval(Rat(0))) {}
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  static ComplexInterval exact(const Rat& r, const Rat& i) {
    return ComplexInterval(Interval(r), Interval(i));
  }

  Rat width() const { return std::max(re.width(), im.width()); }
};

inline ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re + b.re, a.im + b.im};
}
inline ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// |z|^2 as an interval (exact rational arithmetic)
inline Interval norm2(const ComplexInterval& z) {
  Interval r2 = z.re * z.re, i2 = z.im * z.im;
  // squares of intervals never go below 0
  Interval sum = r2 + i2;
  if (sum.lo < 0) sum.lo = 0;
  return sum;
}

}  // namespace bv
