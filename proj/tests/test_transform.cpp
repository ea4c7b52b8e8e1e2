#include "doctest.h"
#include "support.hpp"

#include "bv/measure.hpp"
#include "bv/spectral.hpp"
#include "bv/transform.hpp"

using namespace bv;
using namespace bvtest;

TEST_CASE("order modification") {
  auto d = sturmian(silver_cf(), 6);

  // empty edit list: identical diagram, omega = 0
  auto same = order_modification(d, {});
  CHECK(std::all_of(same.omega.begin(), same.omega.end(), [](std::size_t w) { return w == 0; }));
  for (std::size_t n = 2; n <= d.depth(); ++n)
    CHECK(same.diagram.level(n).orders == d.level(n).orders);

  // swapping two adjacent edges with distinct sources: omega = 2 at that level
  // level 3 of silver sturmian: target0 = [1,1,0]; swap the last two entries
  OrderEdit e{3, 0, {1, 0, 1}};
  auto mod = order_modification(d, {e});
  CHECK(mod.omega[1] == 2);
  CHECK(mod.omega[0] == 0);
  // incidence matrices, products and heights are untouched
  for (std::size_t n = 2; n <= d.depth(); ++n) {
    CHECK(mod.diagram.incidence_matrix(n) == d.incidence_matrix(n));
    CHECK(mod.diagram.heights(n) == d.heights(n));
  }
  CHECK(mod.diagram.product_matrix(1, 5) == d.product_matrix(1, 5));

  // multiset violations are rejected
  OrderEdit bad{3, 0, {1, 1, 1}};
  CHECK_THROWS_AS(order_modification(d, {bad}), std::invalid_argument);
  OrderEdit bad2{3, 0, {1, 0}};
  CHECK_THROWS_AS(order_modification(d, {bad2}), std::invalid_argument);
}

TEST_CASE("preservation audit") {
  SpectralOptions opts;
  auto d2 = odo2(12);

  // omega = 0: trivially preserved
  auto trivially = check_preservation(d2, golden_cf(), {Int(0)}, 10, opts);
  CHECK(trivially.outcome == Outcome::PassUpToDepth);

  // binary odometer, 3/8, any bounded omega: ||| alpha h_n ||| = 0 from level 4
  auto v = check_preservation(d2, AngleSpec::parse("rat:3/8"), {Int(5)}, 10, opts);
  CHECK(v.outcome == Outcome::PassUpToDepth);
  CHECK(*v.tail_bound == 0);

  // sturmian golden with omega_n = q_{n-2}: the weighted terms do not vanish
  auto dg = sturmian(golden_cf(), 22);
  auto q = sturmian_cf_denominators(dg, 22);
  std::vector<Int> omega;
  for (std::size_t level = 2; level <= 21; ++level) omega.push_back(q[level - 2]);
  auto w = check_preservation(dg, golden_cf(), omega, 20, opts);
  CHECK(w.outcome != Outcome::PassUpToDepth);
  bool some_large = false;
  for (const auto& t : w.series)
    if (t.value.lo >= make_rat(1, 10)) some_large = true;
  CHECK(some_large);

  // bounded omega on sturmian golden: inconclusive (no registered tail for weighted series)
  auto bounded = check_preservation(dg, golden_cf(), {Int(1)}, 15, opts);
  CHECK(bounded.outcome == Outcome::Inconclusive);
}

TEST_CASE("spoiling construction at unit scale") {
  auto d = sturmian(golden_cf(), 12);
  SpoilOptions opts;
  opts.max_levels = 2;
  auto res = spoil_continuous(d, {golden_cf()}, opts);

  REQUIRE(res.cuts.size() >= 3);
  REQUIRE(res.witnesses.size() >= 2);
  const Rat quarter = make_rat(1, 4), three_quarters = make_rat(3, 4);
  for (const auto& w : res.witnesses) {
    CHECK(w.term.lo > quarter);
    CHECK(w.term.hi < three_quarters);
  }

  // strong-orbit witness: matrices and heights equal the plain telescoping
  auto deep = d.deepened(res.cuts.back() + 1);
  auto tele = telescope(deep, res.cuts);
  for (std::size_t n = 2; n <= res.diagram.depth(); ++n) {
    CHECK(res.diagram.incidence_matrix(n) == tele.incidence_matrix(n));
    CHECK(res.diagram.heights(n) == tele.heights(n));
  }

  // witness suffix vectors are realized: (0,...,t,...,0) with t at the witness source
  for (const auto& w : res.witnesses) {
    std::vector<Int> expect(2, Int(0));
    expect[w.source] = w.t;
    bool found = false;
    for (std::uint32_t v = 0; v < res.diagram.vertex_count(w.level) && !found; ++v) {
      auto s = suffix_set_range(res.diagram, w.level - 1, w.level, w.source, v, 2000000);
      if (s.count(expect)) found = true;
    }
    CHECK(found);
  }

  // away from the reordered top blocks the suffix sets agree with plain telescoping
  for (std::size_t n = 2; n <= res.diagram.depth(); ++n) {
    for (std::uint32_t v = 0; v < res.diagram.vertex_count(n); ++v) {
      const auto& a = res.diagram.level(n).orders[v];
      const auto& b = tele.level(n).orders[v];
      // identical below the block: find the first index where they differ from the start
      std::size_t agree = 0;
      while (agree < a.size() && a[agree] == b[agree]) ++agree;
      // the disagreement, if any, is confined to the top block (same multiset there)
      std::vector<std::uint8_t> ta(a.begin() + agree, a.end());
      std::vector<std::uint8_t> tb(b.begin() + agree, b.end());
      std::sort(ta.begin(), ta.end());
      std::sort(tb.begin(), tb.end());
      CHECK(ta == tb);
    }
  }

  // the D_n mass report is the schedule's budget check
  CHECK(res.d_mass_sum.hi < 1);

  // rational targets are rejected
  CHECK_THROWS_AS(spoil_continuous(d, {AngleSpec::rational(make_rat(1, 2))}, opts),
                  std::invalid_argument);
}
