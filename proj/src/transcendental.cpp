#include "bv/transcendental.hpp"

#include <mutex>
#include <stdexcept>

namespace bv {

namespace {

// atan(1/n) via the alternating Leibniz series, enclosed by [S_K - t_{K+1}, S_K + t_{K+1}].
Interval atan_inv(unsigned long n, const Rat& eps) {
  Rat sum = 0;
  Rat inv_n2 = make_rat(Int(1), Int(n) * Int(n));
  Rat term = make_rat(Int(1), Int(n));
  unsigned long k = 0;
  while (true) {
    sum += (k % 2 == 0) ? term : Rat(-term);
    ++k;
    term = term * inv_n2 * make_rat(Int(2 * k - 1), Int(2 * k + 1));
    if (term < eps) break;
  }
  return Interval(sum - term, sum + term);
}

Interval compute_pi(const Rat& eps) {
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
  Interval a = atan_inv(5, eps / 64);
  Interval b = atan_inv(239, eps / 64);
  return Rat(16) * a - Rat(4) * b;
}

// cos(2*pi*t) for a rational point t in [0, 1/4], Taylor with alternating tail bound.
// Endpoints are re-rounded onto a coarse grid each step so denominators stay bounded.
Interval cos2pi_quadrant_point(const Rat& t, const Rat& eps) {
  Rat grid = eps / 1024;
  Interval pi = pi_enclosure(eps / 64);
  Interval theta = coarsen(Rat(2) * Interval(t) * pi, grid);  // in [0, pi/2]
  Interval theta2 = coarsen(theta * theta, grid);
  Interval sum(Rat(1));
  Interval term(Rat(1));
  unsigned long k = 0;
  while (true) {
    ++k;
    term = term * theta2;
    term = coarsen(Interval(term.lo / Rat(Int(2 * k - 1) * Int(2 * k)),
                            term.hi / Rat(Int(2 * k - 1) * Int(2 * k))),
                   grid);
    sum = coarsen((k % 2 == 1) ? sum - term : sum + term, grid);
    // once terms decrease, the truncation error is bounded by the next term
    Rat next_bound = term.hi * theta2.hi / Rat(Int(2 * k + 1) * Int(2 * k + 2));
    if (Rat(Int(2 * k + 1) * Int(2 * k + 2)) > theta2.hi && next_bound < eps / 4) {
      return coarsen(Interval(sum.lo - next_bound, sum.hi + next_bound), eps / 16);
    }
    if (k > 200) throw std::runtime_error("cos2pi: series did not converge");
  }
}

// cos(2*pi*t) for a rational point t, any t
Interval cos2pi_point(Rat t, const Rat& eps) {
  t = rat_mod1(t);
  const Rat quarter = make_rat(1, 4);
  const Rat half = make_rat(1, 2);
  const Rat three_quarters = make_rat(3, 4);
  if (t <= quarter) return cos2pi_quadrant_point(t, eps);
  if (t <= half) return -cos2pi_quadrant_point(half - t, eps);
  if (t <= three_quarters) return -cos2pi_quadrant_point(t - half, eps);
  return cos2pi_quadrant_point(1 - t, eps);
}

Interval clamp_to_unit(Interval v) {
  if (v.lo < -1) v.lo = -1;
  if (v.hi > 1) v.hi = 1;
  return v;
}

}  // namespace

Interval pi_enclosure(const Rat& eps) {
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  static Interval cached = compute_pi(pow10_rat(-120));
  if (cached.width() > eps / 4) cached = compute_pi(eps / 4);
  // the Machin partial sums carry enormous denominators; hand out a rounded copy
  return coarsen(cached, eps / 8);
}

Interval cos2pi(const Interval& x, const Rat& eps) {
  if (x.width() >= 1) return Interval(Rat(-1), Rat(1));

  Rat shift(rat_floor(x.lo));
  Rat a = x.lo - shift;  // in [0,1)
  Rat b = x.hi - shift;  // in [0,2)

  Interval ca = cos2pi_point(a, eps);
  Interval cb = cos2pi_point(b, eps);
  Interval out = hull(ca, cb);

  const Rat half = make_rat(1, 2);
  const Rat three_halves = make_rat(3, 2);
  if (b >= 1) out.hi = 1;                                        // maximum at t = 1
  if ((a <= half && half <= b) || three_halves <= b) out.lo = -1;  // minimum at half-integers
  return clamp_to_unit(out);
}

Interval sin2pi(const Interval& x, const Rat& eps) {
  return cos2pi(x - Interval(make_rat(1, 4)), eps);
}

ComplexInterval unit_phase(const Interval& theta, const Rat& eps) {
  return {cos2pi(theta, eps), sin2pi(theta, eps)};
}

Interval interval_sqrt(const Interval& x, const Rat& eps) {
  if (x.hi < 0) throw std::domain_error("interval_sqrt: negative interval");

  // bound the input's denominators first; sqrt maps an eps^2 input grid to eps outputs
  Interval in = coarsen(x, eps * eps / 4);

  auto sqrt_bounds = [&eps](const Rat& r) -> Interval {
    if (r <= 0) return Interval(Rat(0));
    // sqrt(p/q) = sqrt(p*q)/q; scale by S so the bracket width 1/(q*S) <= eps
    Int p = r.get_num(), q = r.get_den();
    Int S = rat_ceil(make_rat(Int(1), q) / eps) + 1;
    Int scaled = p * q * S * S;
    Int root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return Interval(make_rat(root, q * S), make_rat(root + 1, q * S));
  };

  Rat lo = in.lo < 0 ? Rat(0) : in.lo;
  Rat hi = in.hi < 0 ? Rat(0) : in.hi;
  Interval bl = sqrt_bounds(lo);
  Interval bh = sqrt_bounds(hi);
  return coarsen(Interval(bl.lo, bh.hi), eps / 4);
}

Interval interval_norm(const ComplexInterval& z, const Rat& eps) {
  return interval_sqrt(norm2(z), eps);
}

Interval arccos_over_2pi(const Interval& y, const Rat& eps) {
  Interval target = clamp_to_unit(y);
  const Rat half = make_rat(1, 2);
  Rat point_eps = eps * eps / 64;

  // cos(2*pi*t) is strictly decreasing on [0,1/2]; bracket the preimage of [lo,hi]
  auto invert = [&](const Rat& yy, bool want_upper) -> Rat {
    Rat l = 0, r = half;
    for (int it = 0; it < 256 && r - l > eps / 2; ++it) {
      Rat m = (l + r) / 2;
      Interval c = cos2pi_point(m, point_eps);
      if (c.certainly_gt(yy)) {
        l = m;
      } else if (c.certainly_lt(yy)) {
        r = m;
      } else {
        // undecided at this precision: split conservatively
        if (want_upper) l = m; else r = m;
      }
    }
    return want_upper ? r : l;
  };

  Rat t_lo = invert(target.hi, false);   // larger y -> smaller t
  Rat t_hi = invert(target.lo, true);
  if (t_lo > t_hi) std::swap(t_lo, t_hi);
  return Interval(t_lo, t_hi);
}

}  // namespace bv
