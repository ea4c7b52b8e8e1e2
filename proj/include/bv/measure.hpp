#pragma once

#include <cstdint>
#include <vector>

#include "bv/diagram.hpp"
#include "bv/interval.hpp"

namespace bv {

// Enclosure of the invariant-measure vectors mu_n of one detected ergodic cluster.
// Extreme points are normalized deepest-level columns P_{m,N} e_v / h_N(v); the hull of a
// cluster's extreme images satisfies mu_m = P_{m,n} mu_n and <h_n, mu_n> = 1 exactly
// member-by-member, so both identities hold within the stored widths.
struct MeasureEnclosure {
  std::size_t audited_depth = 0;
  std::vector<std::vector<Interval>> mu;      // mu[n-1][v], levels 1..audited_depth
  std::vector<std::uint32_t> extreme_points;  // deepest-level vertices generating the hull
  std::size_t ergodic_hint = 0;               // number of clusters detected overall

  const std::vector<Interval>& at_level(std::size_t n) const;
};

// Propagate every deepest-level extreme candidate to all shallower levels and cluster
// the images whose level-1 distance is below tol; one enclosure per cluster.
// Unique ergodicity is suggested by a single cluster (ergodic_hint == 1).
std::vector<MeasureEnclosure> invariant_measures(const BratteliDiagram& d, std::size_t depth,
                                                 const Rat& tol);

// tower masses mu(tau_n = v) = h_n(v) mu_n(v)
std::vector<Interval> tower_mass(const BratteliDiagram& d, const MeasureEnclosure& mu,
                                 std::size_t n);

struct CleanReport {
  std::vector<std::uint32_t> i_mu;   // vertices whose tower mass stays >= cutoff
  Rat cutoff;                        // threshold used
  Interval delta0;                   // min tower mass over i_mu and audited levels
  bool exact_rank = false;           // i_mu == all vertices
  std::vector<std::vector<Interval>> masses;  // per audited level (>= first_level)
  std::size_t first_level = 1;
};

// Default cutoff: (average tower mass over audited levels) / (2d).
Rat default_clean_cutoff(const BratteliDiagram& d, const MeasureEnclosure& mu);

CleanReport clean_report(const BratteliDiagram& d, const MeasureEnclosure& mu, const Rat& cutoff);

struct MarkovKernel {
  std::size_t m = 0, n = 0;
  Matrix<Interval> q;   // q_{m,n}(u,v) = (mu_n(v)/mu_m(u)) P_{m,n}(u,v)
  Interval zeta;        // 1 - min entry
};

// Refuses when some mu_m(u) enclosure touches 0 (conditional undefined).
MarkovKernel markov_kernel(const BratteliDiagram& d, const MeasureEnclosure& mu, std::size_t m,
                           std::size_t n);

}  // namespace bv
