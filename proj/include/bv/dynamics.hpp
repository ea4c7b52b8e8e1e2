#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "bv/angle.hpp"
#include "bv/diagram.hpp"
#include "bv/interval.hpp"

namespace bv {

enum class TailPolicy : std::uint8_t {
  AllMinimal,  // continue with minimal edges below the stored prefix
  AllMaximal,  // continue with maximal edges
  Explicit,    // the prefix is all there is; operations needing more refuse
};

// A point of the path space, known through a finite edge prefix plus a tail policy.
// ranks[k-1] is the rank of the level-k edge within the order list of its target
// (level 1 = hat: rank among the h_1(v) parallel hat edges). Targets are recovered
// downward from last_vertex, the target of the deepest stored edge.
struct PathPoint {
  std::vector<std::uint32_t> ranks;
  std::uint32_t last_vertex = 0;
  TailPolicy tail = TailPolicy::Explicit;

  std::size_t depth() const { return ranks.size(); }
};

// target vertex of x at level n (tau_n); 0 <= n <= x.depth() (n = 0 gives the root)
std::uint32_t path_vertex(const BratteliDiagram& d, const PathPoint& x, std::size_t n);

// vertices of x at levels 0..depth in one pass
std::vector<std::uint32_t> path_vertices(const BratteliDiagram& d, const PathPoint& x);

void validate_path(const BratteliDiagram& d, const PathPoint& x);

// minimal / maximal path prefix of depth n ending at vertex v
PathPoint minimal_path_into(const BratteliDiagram& d, std::size_t n, std::uint32_t v,
                            TailPolicy tail = TailPolicy::AllMinimal);
PathPoint maximal_path_into(const BratteliDiagram& d, std::size_t n, std::uint32_t v,
                            TailPolicy tail = TailPolicy::AllMaximal);

// Vershik successor: advance the first non-maximal edge, reset everything below to the
// minimal path into the new edge's source. For the all-maximal point the image is the
// all-minimal point when that is resolvable from the stored depth; otherwise throws
// (the caller deepens the diagram and retries).
PathPoint vershik_successor(const BratteliDiagram& d, const PathPoint& x);

// Can the successor be resolved from the stored prefix alone?
bool successor_resolvable(const BratteliDiagram& d, const PathPoint& x);

// Suffix vector s_{m,n}(x): per level-m vertex, the number of paths in E_{m,n} strictly
// greater than x's segment that share x's level-n target. 1 <= m < n <= depth(x).
std::vector<Int> suffix_vector(const BratteliDiagram& d, const PathPoint& x, std::size_t m,
                               std::size_t n);

// s_0(x): number of hat edges above x_1 in its target's (parallel-edge) order
Int suffix_scalar0(const BratteliDiagram& d, const PathPoint& x);

// entrance time r_n(x) = s_0(x) + sum_{i=1}^{n-1} <s_i(x), h_i>
Int entrance_time(const BratteliDiagram& d, const PathPoint& x, std::size_t n);

// S_{n,n+1}(u,v), read off the order list of v at level n+1
std::set<std::vector<Int>> suffix_set(const BratteliDiagram& d, std::size_t n, std::uint32_t u,
                                      std::uint32_t v);

// S_{m,n}(u,v) via the induced order list of composite paths (cap on list size)
std::set<std::vector<Int>> suffix_set_range(const BratteliDiagram& d, std::size_t m,
                                            std::size_t n, std::uint32_t u, std::uint32_t v,
                                            std::size_t cap = 200000);

// All depth-n prefixes ending at v, ascending in the induced order (entrance time =
// distance from the end). Refuses if h_n(v) exceeds cap.
std::vector<PathPoint> enumerate_tower_paths(const BratteliDiagram& d, std::size_t n,
                                             std::uint32_t v, std::size_t cap = 200000);

// Twisted transfer matrix F_{m,n}(u,v) = sum over s in S_{m,n}(u,v) of lambda^{<s,h_m>},
// lambda = exp(2 pi i alpha), computed as the product of single-level twisted matrices.
// Final entry widths are kept below `budget` by retrying at higher phase precision.
Matrix<ComplexInterval> transfer_matrix(const BratteliDiagram& d, std::size_t m, std::size_t n,
                                        const AngleSpec& alpha, const Rat& budget);

// Single-level twisted matrix F_{n,n+1} at phase precision eps.
Matrix<ComplexInterval> twisted_level_matrix(const BratteliDiagram& d, std::size_t n,
                                             const AngleSpec& alpha, const Rat& eps);

}  // namespace bv
