#pragma once

#include <cstdint>
#include <vector>

#include "bv/angle.hpp"
#include "bv/diagram.hpp"
#include "bv/measure.hpp"
#include "bv/spectral.hpp"

namespace bv {

// Rewrite of one local order: the new ordered source list for (level, target vertex).
// Must be a permutation of the old list (incidence matrices are invariants of edits).
struct OrderEdit {
  std::size_t level = 0;
  std::uint32_t vertex = 0;
  std::vector<std::uint8_t> new_order;
};

struct ModificationResult {
  BratteliDiagram diagram;
  std::vector<std::size_t> omega;  // omega[n-2] = max positions changed at level n
  PropernessReport properness;
};

ModificationResult order_modification(const BratteliDiagram& d,
                                      const std::vector<OrderEdit>& edits);

// Cor. 3.5-style audit: partial sums of omega_{n+1} * ||| alpha h_n |||. Pass evidence
// means the eigenvalue survives any proper modification of the given sizes.
// omega[k] is the bound for level k+2 (aligned with OrderEdit levels); missing entries
// default to the last given value.
Verdict check_preservation(const BratteliDiagram& d, const AngleSpec& alpha,
                           const std::vector<Int>& omega, std::size_t depth,
                           const SpectralOptions& opts = {});

struct SpoilWitness {
  std::size_t level = 0;        // constructed level of the output diagram
  std::string target;           // angle spec text
  std::uint32_t source = 0;     // coordinate carrying t in the suffix vector
  std::uint32_t vertex = 0;     // any target vertex (witness holds for each)
  Int t;                        // block depth selected, t = floor(1/(2|eta|)) + 1
  Interval term;                // ||| t * alpha * h(source) |||, certified in (1/4, 3/4)
};

struct SpoilResult {
  BratteliDiagram diagram;                 // telescoped + reordered
  std::vector<std::size_t> cuts;           // telescoping levels used
  std::vector<SpoilWitness> witnesses;
  Interval d_mass_sum;                     // sum of mu(D_n) over constructed levels
  PropernessReport properness;
};

struct SpoilOptions {
  std::size_t max_levels = 3;       // constructed (modified) levels to build
  Rat epsilon_base = make_rat(7, 10);  // D_n mass budget eps_n = epsilon_base^n (summable)
  std::size_t depth_cap = 200;      // give up searching cut levels past this depth
  std::size_t list_cap = 120000000; // largest total order-list size the output materializes
  Rat precision = pow10_rat(-40);
};

// Telescope-and-reorder construction that destroys the targets as continuous eigenvalues:
// at each constructed level the paths through the maximal edge bundle e_v are re-sorted by
// their source vertex, which plants suffix vectors (0,...,t,...,0) sweeping phases t*eta.
// Requires composed-max-source certificates over the chosen gaps; deepens d on demand.
SpoilResult spoil_continuous(const BratteliDiagram& d, const std::vector<AngleSpec>& targets,
                             const SpoilOptions& opts = {});

}  // namespace bv
