#pragma once

#include <vector>

#include "bv/angle.hpp"
#include "bv/diagram.hpp"

namespace bv {

// Bratteli-Vershik presentation of the Sturmian coding of the rotation by
// alpha = [0; a_1, a_2, ...]: two vertices per level, hat (1,1),
// M_2 = [[a_1, a_1-1], [1, 1]] and M_{n+1} = [[1, 1], [a_n, a_n-1]].
//
// Local orders (one conformant encoding of the paper-figure order; the normative check
// is the suffix-vector family, see tests):
//   level 2:          target0 = [0 x a_1, 1],      target1 = [0 x (a_1-1), 1]
//   level n+1, a_n>1: target0 = [1 x a_n, 0],      target1 = [1 x (a_n-1), 0]
//   level n+1, a_n=1: target0 = [1,0] (even level) or [0,1] (odd level), target1 = [0]
// The a_n = 1 alternation keeps the composed extremal-source maps constant at gap 2,
// which is what certifies unique maximal/minimal paths.
//
// The whole-diagram suffix family is {(0,0),(0,1)} U {(1,i); 0 <= i < a_n}.
// When `simplify` is set, levels whose incidence matrix has a zero entry are merged
// with the following level (telescoping with gaps <= 2), restoring H2.
BratteliDiagram sturmian(const AngleSpec& cf, std::size_t depth, bool simplify = false);

// Odometer with q_k edges at level k+1 (single vertex per level, edges ordered 0..q_k-1).
// If periodic, the q list repeats forever and a generator is installed.
BratteliDiagram odometer(const std::vector<Int>& q, bool periodic, std::size_t depth);

// Validating constructor for Toeplitz-type diagrams (equal path number per level):
// rejects any level whose targets do not all have the same in-degree, naming the vertex.
BratteliDiagram toeplitz_type(std::vector<Int> hat, std::vector<OrderedLevel> levels);

// Canonical d-vertex Toeplitz-type family: at a level with characteristic number q,
// target v receives edges from sources v, v+1, ..., v+q-1 (mod d), in that order.
BratteliDiagram toeplitz_canonical(std::uint32_t vertices, const std::vector<Int>& q,
                                   bool periodic, std::size_t depth);

// Stationary diagram: every level repeats the given ordered template (square and
// entrywise positive); hat is the all-ones vector.
BratteliDiagram stationary(const OrderedLevel& level_template, std::size_t depth);

// characteristic numbers q_n and products of a Toeplitz-type diagram
// (q[k] = in-degree at level k+2, aligned with the odometer/toeplitz builders)
std::vector<Int> characteristic_sequence(const BratteliDiagram& d);

// Continued-fraction denominators q_0, q_1, ..., q_n for a Sturmian family diagram.
std::vector<Int> sturmian_cf_denominators(const BratteliDiagram& d, std::size_t n);

}  // namespace bv
