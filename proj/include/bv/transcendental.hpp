#pragma once

#include "bv/interval.hpp"

namespace bv {

// Enclosure of pi with width <= eps (Machin's formula, exact rational partial sums).
Interval pi_enclosure(const Rat& eps);

// Enclosures of cos(2*pi*x) and sin(2*pi*x), width <= eps + 2*pi*width(x).
Interval cos2pi(const Interval& x, const Rat& eps);
Interval sin2pi(const Interval& x, const Rat& eps);

// e^{2*pi*i*theta} as a complex box.
ComplexInterval unit_phase(const Interval& theta, const Rat& eps);

// Enclosure of sqrt(x) for x >= 0 (lo clamped to 0 if x.lo < 0 due to enclosure slack,
// refused if x.hi < 0), width <= eps + O(width(x)).
Interval interval_sqrt(const Interval& x, const Rat& eps);

// |z| as an interval.
Interval interval_norm(const ComplexInterval& z, const Rat& eps);

// Inverse of t |-> cos(2*pi*t) on t in [0, 1/2]: returns t with cos(2*pi*t) = y,
// as an enclosure of width <= eps. y is clamped to [-1, 1].
Interval arccos_over_2pi(const Interval& y, const Rat& eps);

}  // namespace bv
