#include "bv/interval.hpp"

namespace bv {

Interval coarsen(const Interval& x, const Rat& step) {
  if (step <= 0) return x;
  Rat lo = Rat(rat_floor(x.lo / step)) * step;
  Rat hi = Rat(rat_ceil(x.hi / step)) * step;
  return Interval(lo, hi);
}

Interval nearest_int_dist(const Interval& x) {
  const Rat half = make_rat(1, 2);
  if (x.width() >= 1) return Interval(Rat(0), half);

  // shift so that lo lands in [0,1); hi then lies in [0,2)
  Rat shift(rat_floor(x.lo));
  Rat a = x.lo - shift;
  Rat b = x.hi - shift;

  Rat da = rat_nearest_int_dist(a);
  Rat db = rat_nearest_int_dist(b);
  Rat lo = std::min(da, db);
  Rat hi = std::max(da, db);

  // interior extrema: integers give distance 0, half-integers give 1/2
  if (a == 0 || b >= 1) lo = 0;                        // 0, 1 or 2 inside [a,b]
  if ((a <= half && half <= b) || b >= make_rat(3, 2)) hi = half;
  return Interval(lo, hi);
}

}  // namespace bv
