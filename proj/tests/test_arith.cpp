#include <random>

#include "bv/angle.hpp"
#include "bv/transcendental.hpp"
#include "doctest.h"

using namespace bv;

TEST_CASE("nearest_int_dist on exact rationals") {
  CHECK(rat_nearest_int_dist(make_rat(9, 4)) == make_rat(1, 4));    // 2.25 -> 0.25
  CHECK(rat_nearest_int_dist(make_rat(-1, 2)) == make_rat(1, 2));   // -0.5 -> 0.5
  CHECK(rat_nearest_int_dist(Rat(7)) == 0);
  CHECK(nearest_int_dist(Interval(make_rat(9, 4))).is_point());

  // invariance under integer shifts
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97), shift(-50, 50);
  for (int i = 0; i < 300; ++i) {
    Rat x = make_rat(num(rng), den(rng));
    CHECK(rat_nearest_int_dist(x) == rat_nearest_int_dist(x + Rat(shift(rng))));
  }
}

TEST_CASE("nearest_int_dist interval cases") {
  // straddles the integer 1: minimum distance 0
  Interval a(make_rat(9, 10), make_rat(11, 10));
  Interval da = nearest_int_dist(a);
  CHECK(da.lo == 0);
  CHECK(da.hi == make_rat(1, 10));
  // straddles a half-integer: maximum 1/2
  Interval b(make_rat(2, 5), make_rat(3, 5));
  Interval db = nearest_int_dist(b);
  CHECK(db.hi == make_rat(1, 2));
  CHECK(db.lo == make_rat(2, 5));
  // wide interval
  CHECK(nearest_int_dist(Interval(Rat(0), Rat(5))).hi == make_rat(1, 2));
}

TEST_CASE("cf_convergents recursions") {
  std::vector<Int> ones(10, Int(1));
  auto c = cf_convergents(ones, 5);
  // q = (1,1,2,3,5,8): Fibonacci forced by the recursion
  std::vector<long> expect_q{1, 1, 2, 3, 5, 8};
  for (std::size_t k = 0; k <= 5; ++k) CHECK(c[k].second == expect_q[k]);

  std::vector<Int> twos{Int(2), Int(2), Int(2)};
  auto c2 = cf_convergents(twos, 3);
  std::vector<long> expect2{1, 2, 5, 12};
  for (std::size_t k = 0; k <= 3; ++k) CHECK(c2[k].second == expect2[k]);

  CHECK_THROWS(cf_convergents({Int(0)}, 1));
}

TEST_CASE("golden continued fraction value and approximation quality") {
  AngleSpec golden = AngleSpec::continued_fraction({}, {Int(1)});
  Interval v = angle_value(golden, pow10_rat(-20));
  CHECK(v.width() <= pow10_rat(-20));
  // independent oracle: the value is the positive root of x^2 + x - 1 = 0
  Interval p = v * v + v - Interval(Rat(1));
  CHECK(p.contains(Rat(0)));

  // |alpha - p_10/q_10| < 1/q_10^2 via the 1e-20 enclosure
  std::vector<Int> ones(12, Int(1));
  auto c = cf_convergents(ones, 10);
  Rat approx = make_rat(c[10].first, c[10].second);
  Interval diff = interval_abs(v - Interval(approx));
  CHECK(diff.hi < make_rat(Int(1), c[10].second * c[10].second));

  // consecutive convergents bracket the value
  for (std::size_t k = 2; k + 1 <= 10; k += 2) {
    CHECK(Rat(make_rat(c[k].first, c[k].second)) < v.lo);
    CHECK(Rat(make_rat(c[k + 1].first, c[k + 1].second)) > v.hi);
  }
}

TEST_CASE("angle_value kinds and refinement monotonicity") {
  AngleSpec r = AngleSpec::parse("rat:3/8");
  Interval vr = angle_value(r, pow10_rat(-2));
  CHECK(vr.is_point());
  CHECK(vr.lo == make_rat(3, 8));

  AngleSpec golden = AngleSpec::parse("cf:~1");
  Interval coarse = angle_value(golden, pow10_rat(-6));
  Interval fine = angle_value(golden, pow10_rat(-15));
  CHECK(coarse.contains(fine));  // refinement never widens
  CHECK(coarse.width() <= pow10_rat(-6));

  // golden conjugate ~ 0.6180339887
  CHECK(fine.lo > make_rat(618033988, 1000000000));
  CHECK(fine.hi < make_rat(618033989, 1000000000));

  // affine: 2*alpha - 1 mod 1 ~ 0.2360679
  AngleSpec aff = AngleSpec::parse("affine:2*cf:~1+(-1)");
  Interval va = angle_value(aff, pow10_rat(-9));
  CHECK(va.width() <= pow10_rat(-9));
  Interval twice = Rat(2) * fine - Interval(Rat(1));
  CHECK(va.intersects(twice));
  CHECK(va.lo > make_rat(236067977, 1000000000));
  CHECK(va.hi < make_rat(236067978, 1000000000));

  // golden ||| . ||| at width 1e-12: encloses 1 - alpha ~ 0.381966
  Interval tight = angle_value(golden, pow10_rat(-12));
  Interval nd = nearest_int_dist(tight);
  CHECK((nd + tight).contains(Rat(1)));
  CHECK(nd.lo > make_rat(381966011, 1000000000));
  CHECK(nd.hi < make_rat(381966012, 1000000000));
}

TEST_CASE("angle spec normalization and parsing") {
  // finite continued fraction collapses to a rational: [0;1,2] = 2/3
  AngleSpec fin = AngleSpec::continued_fraction({Int(1), Int(2)}, {});
  CHECK(fin.is_rational());
  CHECK(fin.rational_value() == make_rat(2, 3));

  // affine over a rational base collapses too
  AngleSpec a = AngleSpec::affine(Int(2), AngleSpec::rational(make_rat(3, 8)), Int(-1));
  CHECK(a.is_rational());
  CHECK(a.rational_value() == make_rat(3, 4));  // 2*(3/8) - 1 mod 1

  CHECK(AngleSpec::parse("rat:-1/3").rational_value() == make_rat(2, 3));
  AngleSpec cf = AngleSpec::parse("cf:2,1,~3,4");
  CHECK(cf.cf_coefficient(1) == 2);
  CHECK(cf.cf_coefficient(2) == 1);
  CHECK(cf.cf_coefficient(3) == 3);
  CHECK(cf.cf_coefficient(4) == 4);
  CHECK(cf.cf_coefficient(5) == 3);
  CHECK(AngleSpec::parse(cf.to_string()) == cf);
  CHECK_THROWS(AngleSpec::parse("cf:0,~1"));
  CHECK_THROWS(AngleSpec::parse("bogus:1"));
}

TEST_CASE("interval trig enclosures") {
  Rat eps = pow10_rat(-25);
  Interval pi = pi_enclosure(eps);
  CHECK(pi.width() <= eps);
  CHECK(pi.lo > make_rat(314159265, 100000000));
  CHECK(pi.hi < make_rat(314159266, 100000000));

  CHECK(cos2pi(Interval(Rat(0)), eps).contains(Rat(1)));
  CHECK(cos2pi(Interval(make_rat(1, 2)), eps).contains(Rat(-1)));
  CHECK(cos2pi(Interval(make_rat(1, 4)), eps).contains(Rat(0)));
  CHECK(cos2pi(Interval(make_rat(1, 4)), eps).width() <= 2 * eps);
  CHECK(cos2pi(Interval(make_rat(1, 6)), eps).contains(make_rat(1, 2)));   // cos 60 deg
  CHECK(cos2pi(Interval(make_rat(1, 3)), eps).contains(make_rat(-1, 2)));  // cos 120 deg
  CHECK(sin2pi(Interval(make_rat(1, 4)), eps).contains(Rat(1)));

  // interval crossing a maximum
  Interval c = cos2pi(Interval(make_rat(-1, 10), make_rat(1, 10)), eps);
  CHECK(c.hi == 1);
  CHECK(c.lo < make_rat(81, 100));

  // sqrt oracle: square the enclosure back
  Interval s = interval_sqrt(Interval(Rat(2)), pow10_rat(-15));
  CHECK((s * s).contains(Rat(2)));
  CHECK(s.width() <= pow10_rat(-14));

  // arccos inverts cos2pi on [0, 1/2]
  Interval g = arccos_over_2pi(Interval(make_rat(1, 2)), pow10_rat(-10));
  CHECK(g.contains(make_rat(1, 6)));
  CHECK(g.width() < pow10_rat(-8));

  // |unit_phase| = 1 within enclosure
  Interval n = interval_norm(unit_phase(Interval(make_rat(3, 7)), eps), pow10_rat(-15));
  CHECK(n.contains(Rat(1)));
}
