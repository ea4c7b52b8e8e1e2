#include <random>
#include <set>

#include "bv/measure.hpp"
#include "bv/spectral.hpp"
#include "bv/transcendental.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bv;
using namespace bvtest;

namespace {

MeasureEnclosure measure_of(const BratteliDiagram& d, std::size_t depth) {
  auto ms = invariant_measures(d, depth, make_rat(1, 1000));
  REQUIRE(ms.size() == 1);
  return ms[0];
}

}  // namespace

TEST_CASE("candidates on the binary odometer are the dyadic rationals in reach") {
  auto d = odo2(7);
  auto mu = measure_of(d, 6);
  CandidateOptions opts;  // seed bound 8, window [2, depth]
  auto cs = enumerate_candidates(d, mu, 6, opts);

  // independent expected set: { a / h_m mod 1 : 2 <= m <= 6, |a| <= 8 }
  std::set<Rat> expected;
  for (std::size_t m = 2; m <= 6; ++m)
    for (long a = -8; a <= 8; ++a) expected.insert(rat_mod1(make_rat(Int(a), d.heights(m)[0])));

  std::set<Rat> got;
  for (const auto& c : cs) {
    REQUIRE(c.spec.has_value());
    REQUIRE(c.spec->is_rational());
    CHECK(c.certified);
    got.insert(c.spec->rational_value());
    CHECK(c.alpha.contains(c.spec->rational_value()));
  }
  CHECK(got == expected);
  CHECK(got.count(Rat(0)) == 1);  // alpha = 0 always returned
}

TEST_CASE("candidates on sturmian golden live in Z alpha + Z") {
  auto d = sturmian(golden_cf(), 32);
  auto mu = measure_of(d, 32);
  CandidateOptions opts;
  opts.seed_bound = 3;
  auto cs = enumerate_candidates(d, mu, 10, opts);
  REQUIRE(!cs.empty());

  Interval alpha = angle_value(golden_cf(), pow10_rat(-25));
  bool zero_seen = false;
  bool certified_seen = false;
  for (const auto& c : cs) {
    if (!c.certified) continue;
    certified_seen = true;
    // every candidate is an integer combination m alpha + n; the reachable coefficient
    // range grows with the seed window, so the membership check uses a generous box
    bool matches = false;
    for (long m = -200; m <= 200 && !matches; ++m) {
      Interval beta = Rat(m) * alpha;
      Rat shift(rat_floor(beta.lo));
      beta = Interval(beta.lo - shift, beta.hi - shift);
      if (beta.intersects(c.alpha) || (beta - Rat(1)).intersects(c.alpha) ||
          (beta + Rat(1)).intersects(c.alpha))
        matches = true;
    }
    CHECK(matches);
    if (c.spec && c.spec->is_rational() && c.spec->rational_value() == 0) zero_seen = true;
    // affine reconstruction agrees with the enclosure (mod 1)
    if (c.spec) {
      Interval sv = angle_value(*c.spec, pow10_rat(-25));
      CHECK((sv.intersects(c.alpha) || (sv + Rat(1)).intersects(c.alpha) ||
             (sv - Rat(1)).intersects(c.alpha)));
    }
  }
  CHECK(zero_seen);
  CHECK(certified_seen);

  // completeness: the small combinations m alpha + n, |m| <= 2, are all present
  for (long m = -2; m <= 2; ++m) {
    Interval beta = Rat(m) * alpha;
    Rat shift(rat_floor(beta.lo));
    beta = Interval(beta.lo - shift, beta.hi - shift);
    bool found = false;
    for (const auto& c : cs)
      if (c.alpha.intersects(beta) || c.alpha.intersects(beta + Rat(1)) ||
          c.alpha.intersects(beta - Rat(1)))
        found = true;
    CHECK(found);
  }

  // candidate soundness: eta trace ends certified small
  for (const auto& c : cs)
    if (c.certified) CHECK(c.eta_trace.back().hi < make_rat(1, 4));
}

TEST_CASE("test_continuous on the binary odometer") {
  auto d = odo2(12);
  SpectralOptions opts;

  auto pass = test_continuous(d, AngleSpec::parse("rat:3/8"), 10, opts);
  CHECK(pass.outcome == Outcome::PassUpToDepth);
  REQUIRE(pass.tail_bound.has_value());
  CHECK(*pass.tail_bound == 0);
  // terms vanish exactly once 8 divides the heights (levels >= 4)
  for (const auto& t : pass.series) {
    if (t.level >= 4) {
      CHECK(t.value.is_point());
      CHECK(t.value.lo == 0);
    }
  }
  CHECK(pass.series[2].value.lo > 0);  // t_3 = |||3/2||| = 1/2

  auto fail = test_continuous(d, golden_cf(), 30, opts);
  CHECK(fail.outcome == Outcome::FailAtDepth);
  CHECK(fail.witnesses.size() >= 3);

  // 1/3 never divides powers of two: no tail, many big terms
  auto third = test_continuous(d, AngleSpec::parse("rat:1/3"), 12, opts);
  CHECK(third.outcome == Outcome::FailAtDepth);
}

TEST_CASE("test_continuous on sturmian families") {
  auto d = sturmian(golden_cf(), 22);
  SpectralOptions opts;
  auto v = test_continuous(d, golden_cf(), 20, opts);
  CHECK(v.outcome == Outcome::PassUpToDepth);
  REQUIRE(v.tail_bound.has_value());
  CHECK(*v.tail_bound > 0);

  auto q = sturmian_cf_denominators(d, 20);
  for (const auto& t : v.series)
    if (t.level >= 5) CHECK(t.value.hi < make_rat(Int(1), q[t.level - 2]));

  // beta = 2 alpha - 1 is also a continuous eigenvalue (affine over the family base)
  auto affine = test_continuous(d, AngleSpec::parse("affine:2*cf:~1+(-1)"), 18, opts);
  CHECK(affine.outcome == Outcome::PassUpToDepth);

  // 1/2 never divides both Fibonacci heights
  CHECK(!rational_shortcut(d, make_rat(1, 2)).has_value());
  auto half = test_continuous(d, AngleSpec::parse("rat:1/2"), 18, opts);
  CHECK(half.outcome == Outcome::FailAtDepth);
}

TEST_CASE("rational shortcut") {
  auto d = odo2(10);
  CHECK(rational_shortcut(d, make_rat(3, 8)) == 4);  // h_4 = 8
  CHECK(!rational_shortcut(d, make_rat(1, 3)).has_value());
  CHECK(rational_shortcut(d, Rat(0)) == 1);  // denominator 1 divides everything

  auto d23 = odometer({Int(2), Int(3)}, true, 8);
  CHECK(rational_shortcut(d23, make_rat(1, 6)) == 3);

  // rational completeness: shortcut implies Pass with identically-zero tail
  auto v = test_continuous(d23, AngleSpec::parse("rat:1/6"), 7);
  CHECK(v.outcome == Outcome::PassUpToDepth);
  CHECK(*v.tail_bound == 0);
}

TEST_CASE("test_measurable on the binary odometer") {
  SpectralOptions opts;
  auto d = odo2(16);
  auto mu = measure_of(d, 16);
  auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));

  auto rep = test_measurable(d, mu, clean, AngleSpec::parse("rat:3/8"), 15, opts);
  CHECK(rep.verdict.outcome == Outcome::PassUpToDepth);
  // Delta rows vanish exactly once 8 divides h_m (m >= 4), over the audited rows
  REQUIRE(rep.delta_rows.size() >= 8);
  for (std::size_t m = 4; m <= rep.delta_rows.size(); ++m)
    for (const auto& entry : rep.delta_rows[m - 1]) {
      CHECK(entry.lo == 0);
      CHECK(entry.hi <= pow10_rat(-9));
    }
  CHECK(rep.condition1.outcome == Outcome::PassUpToDepth);

  auto repg = test_measurable(d, mu, clean, golden_cf(), 15, opts);
  CHECK(repg.verdict.outcome == Outcome::FailAtDepth);
  // every audited row's sup reaches 0.2
  for (const auto& t : repg.verdict.series) CHECK(t.value.lo >= make_rat(1, 5));
  CHECK(repg.condition1.outcome == Outcome::FailAtDepth);

  auto zero = test_measurable(d, mu, clean, AngleSpec::rational(Rat(0)), 10, opts);
  CHECK(zero.verdict.outcome == Outcome::PassUpToDepth);
}

TEST_CASE("measurable conditions (1) and (2) agree on the positive corpus") {
  SpectralOptions opts;
  std::vector<AngleSpec> alphas{AngleSpec::rational(Rat(0)), AngleSpec::parse("rat:1/2"),
                                AngleSpec::parse("rat:1/3"), golden_cf()};
  for (const auto& e : positive_corpus()) {
    BratteliDiagram d = e.diagram.can_deepen() && e.diagram.depth() < 10
                            ? e.diagram.deepened(10)
                            : e.diagram;
    if (!d.h4_constant_rank()) continue;
    std::size_t N = d.depth();
    auto ms = invariant_measures(d, N, make_rat(1, 1000));
    for (const auto& mu : ms) {
      auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));
      // the equivalence of (1) and (2) is asymptotic in m; at desk depth the verdicts
      // coincide once the presentation is exact rank (no transient deficit in (1))
      if (!clean.exact_rank) continue;
      for (const auto& a : alphas) {
        auto rep = test_measurable(d, mu, clean, a, N, opts);
        CHECK(rep.verdict.outcome == rep.condition1.outcome);
      }
    }
  }
}

TEST_CASE("geometric cluster") {
  // all angles equal: zero outliers for any valid parameters
  std::vector<Rat> same(5, make_rat(1, 3));
  auto r = geometric_cluster(same, make_rat(1, 2), make_rat(1, 4));
  CHECK(r.outlier_count == 0);

  // N = 4, angles (0,0,0,1/2), eps just above the hypothesis boundary 1/2
  std::vector<Rat> mix{Rat(0), Rat(0), Rat(0), make_rat(1, 2)};
  auto r2 = geometric_cluster(mix, make_rat(51, 100), make_rat(1, 4));
  CHECK(r2.index <= 2);  // one of the zeros
  CHECK(r2.outlier_count == 1);
  // bound = 2*4*eps / (1 - cos(pi/2)) = 8 eps; strict bound verified
  CHECK(r2.bound.contains(make_rat(8 * 51, 100)));
  CHECK(Rat(static_cast<long>(r2.outlier_count)) < r2.bound.lo);

  // hypothesis failure refused
  std::vector<Rat> spread{Rat(0), make_rat(1, 4), make_rat(1, 2), make_rat(3, 4)};
  CHECK_THROWS_AS(geometric_cluster(spread, make_rat(1, 100), make_rat(1, 4)),
                  std::domain_error);

  // randomized instances, exhaustively cross-checked
  std::mt19937 rng(2718);
  std::uniform_int_distribution<int> size(2, 12), num(0, 23), gsel(0, 2);
  const Rat gammas[3] = {make_rat(1, 6), make_rat(1, 4), make_rat(1, 3)};
  const Rat cosg[3] = {make_rat(1, 2), Rat(0), make_rat(-1, 2)};
  int accepted = 0;
  for (int it = 0; it < 400 && accepted < 60; ++it) {
    int N = size(rng);
    std::vector<Rat> angles(1, make_rat(num(rng), 24));
    for (int k = 1; k < N; ++k) {
      // cluster most angles near the first to satisfy the hypothesis often
      if (rng() % 4 != 0) angles.push_back(angles[0]);
      else angles.push_back(make_rat(num(rng), 24));
    }
    int gi = gsel(rng);
    // certified |S| via enclosures, then a valid eps strictly above the boundary
    ComplexInterval S = ComplexInterval::exact(Rat(0), Rat(0));
    for (const auto& a : angles) S = S + unit_phase(Interval(a), pow10_rat(-30));
    Interval absS = interval_norm(S, pow10_rat(-25));
    Rat N_r(static_cast<long>(N));
    Rat eps = 1 - absS.lo / N_r + make_rat(1, 50);
    if (!(eps > 0 && eps <= 1)) continue;
    ClusterResult res;
    try {
      res = geometric_cluster(angles, eps, gammas[gi]);
    } catch (const std::domain_error&) {
      continue;
    }
    ++accepted;
    // exact strict bound 2 N eps / (1 - cos 2 pi gamma), rational here
    Rat bound = 2 * N_r * eps / (1 - cosg[gi]);
    std::size_t count = 0;
    for (const auto& a : angles)
      if (rat_nearest_int_dist(a - angles[res.index]) >= gammas[gi]) ++count;
    CHECK(count == res.outlier_count);
    CHECK(Rat(static_cast<long>(count)) < bound);
    // the lemma promises some index within the bound; the returned one minimizes
    for (std::size_t l = 0; l < angles.size(); ++l) {
      std::size_t cl = 0;
      for (const auto& a : angles)
        if (rat_nearest_int_dist(a - angles[l]) >= gammas[gi]) ++cl;
      CHECK(cl >= res.outlier_count);
    }
  }
  CHECK(accepted >= 40);
}

TEST_CASE("rho estimation") {
  SpectralOptions opts;
  auto d = odo2(9);
  auto mu = measure_of(d, 9);
  auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));

  auto est = estimate_rho(d, mu, clean, AngleSpec::parse("rat:3/8"), 8, 0, opts);
  // alpha Lambda is integral for m >= 4: phases exactly 0
  for (std::size_t m = 4; m < 8; ++m) {
    REQUIRE(est.phase[m - 1][0].has_value());
    CHECK(est.phase[m - 1][0]->is_point());
    CHECK(est.phase[m - 1][0]->lo == 0);
  }
  // zero-outlier triples must satisfy the quasi-additivity bound outright
  std::size_t checked = 0;
  for (const auto& res : est.residuals)
    if (res.out_lm == 0 && res.out_mn == 0 && res.out_ln == 0) {
      CHECK(res.value.lo <= res.gamma_sum.hi);
      ++checked;
    }
  CHECK(checked > 0);

  // alpha = 0: trivially zero phases everywhere
  auto est0 = estimate_rho(d, mu, clean, AngleSpec::rational(Rat(0)), 6, 0, opts);
  for (std::size_t m = 1; m < 6; ++m)
    if (est0.phase[m - 1][0]) CHECK(est0.phase[m - 1][0]->lo == 0);

  // quasi-additivity audit on a diagram that passes the measurable test; the bound is
  // forced wherever the three clusters have no outliers (the paper's "large enough")
  auto dg = sturmian(golden_cf(), 9);
  auto mug = measure_of(dg, 9);
  auto cleang = clean_report(dg, mug, default_clean_cutoff(dg, mug));
  auto estg = estimate_rho(dg, mug, cleang, golden_cf(), 8, 0, opts);
  CHECK(!estg.residuals.empty());
  std::size_t forced = 0;
  for (const auto& res : estg.residuals)
    if (res.out_lm == 0 && res.out_mn == 0 && res.out_ln == 0) {
      CHECK(res.value.lo <= res.gamma_sum.hi);
      ++forced;
    }
  CHECK(forced > 0);
}

TEST_CASE("exact rank series test") {
  SpectralOptions opts;
  auto d = odo2(12);
  auto mu = measure_of(d, 12);
  auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));
  std::vector<std::vector<Interval>> rho_zero;

  auto pass = test_exact_rank_series(d, mu, clean, AngleSpec::parse("rat:3/8"), rho_zero, 10, opts);
  CHECK(pass.outcome == Outcome::PassUpToDepth);
  for (const auto& t : pass.series)
    if (t.level >= 4) CHECK(t.value.hi <= pow10_rat(-12));

  auto zero = test_exact_rank_series(d, mu, clean, AngleSpec::rational(Rat(0)), rho_zero, 8, opts);
  CHECK(zero.outcome == Outcome::PassUpToDepth);

  auto fail = test_exact_rank_series(d, mu, clean, golden_cf(), rho_zero, 11, opts);
  CHECK(fail.outcome == Outcome::FailAtDepth);

  // non-exact-rank presentations are refused
  auto dt = transient_vertex_diagram();
  auto mut = invariant_measures(dt, 5, make_rat(1, 1000))[0];
  auto cleant = clean_report(dt, mut, default_clean_cutoff(dt, mut));
  CHECK_THROWS_AS(
      test_exact_rank_series(dt, mut, cleant, AngleSpec::rational(Rat(0)), rho_zero, 4, opts),
      std::invalid_argument);
}
