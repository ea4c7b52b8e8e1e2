#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bv/matrix.hpp"

namespace bv {

// One level of an ordered Bratteli diagram: for each target vertex, the ordered list of
// source vertices of its incoming edges (position in the list = rank in the local order;
// a source appearing k times means k parallel edges). The incidence matrix is derived.
struct OrderedLevel {
  std::uint32_t source_count = 0;
  std::uint32_t target_count = 0;
  // orders[v] = ordered sources of edges into target v; entries < source_count
  std::vector<std::vector<std::uint8_t>> orders;

  void validate() const;  // nonempty lists, every source used, indices in range
  IntMatrix incidence() const;
  bool positive() const;  // H2 at this level: every (u,v) has at least one edge
};

// Family metadata for generated diagrams; carries what downstream analyses may rely on
// (lazy deepening rule, registered tail bounds for series verdicts).
struct DiagramFamily {
  std::string name;  // "sturmian" | "odometer" | "toeplitz" | "stationary"
  std::vector<Int> cf_prefix, cf_cycle;  // sturmian
  std::vector<Int> edge_counts;          // odometer/toeplitz characteristic numbers (level 2..)
  bool periodic = false;                  // edge_counts/cf repeat forever
  std::function<OrderedLevel(std::size_t level)> make_level;  // level >= 2
};

class BratteliDiagram {
 public:
  // hat = level-1 heights h_1 (number of hat edges into each level-1 vertex);
  // levels[i] describes level i+2.
  BratteliDiagram(std::vector<Int> hat, std::vector<OrderedLevel> levels,
                  std::optional<DiagramFamily> family = std::nullopt);

  std::size_t depth() const { return levels_.size() + 1; }             // deepest level index n
  std::size_t vertex_count(std::size_t level) const;                    // d_n, 1 <= level <= depth
  const std::vector<Int>& hat() const { return hat_; }
  const OrderedLevel& level(std::size_t n) const;                       // 2 <= n <= depth
  const std::optional<DiagramFamily>& family() const { return family_; }

  // M_n for 2 <= n <= depth (rows = V_{n-1}, columns = V_n)
  const IntMatrix& incidence_matrix(std::size_t n) const;
  // P_{m,n} = M_{m+1} ... M_n (P_{n,n} = I), 1 <= m <= n <= depth
  IntMatrix product_matrix(std::size_t m, std::size_t n) const;
  // h_n = h_1 P_{1,n}
  const std::vector<Int>& heights(std::size_t n) const;

  // new diagram extended to at least `target_depth` via the family generator
  BratteliDiagram deepened(std::size_t target_depth) const;
  bool can_deepen() const { return family_.has_value() && family_->make_level != nullptr; }

  // hypothesis flags (computed, never assumed)
  bool h1_unit_hat() const;                  // H1
  bool h2_positive(std::size_t n) const;     // H2 at level n
  bool h4_constant_rank() const;             // H4

 private:
  std::vector<Int> hat_;
  std::vector<OrderedLevel> levels_;
  std::optional<DiagramFamily> family_;
  // derived, filled at construction
  std::vector<IntMatrix> incidence_;          // [n-2] = M_n
  std::vector<std::vector<Int>> heights_;     // [n-1] = h_n
};

// Telescoping: cuts = 0 = n_0 < n_1 < ... <= depth; level k of the result carries
// E_{n_{k-1}, n_k} with the induced last-difference order.
BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& cuts);

// Order list of composite paths from V_m into target vertex v at level n, as the sequence
// of level-m source vertices in induced order (size = column sum of P_{m,n} at v).
std::vector<std::uint8_t> induced_order_list(const BratteliDiagram& d, std::size_t m,
                                             std::size_t n, std::uint32_t v);

struct PropernessReport {
  bool h1_ok = false;
  bool simple_ok = false;                 // H2 at every audited level
  std::vector<std::size_t> h2_failures;   // levels where some entry of M_n is 0
  bool max_source_ok = false;             // H3 at every audited level
  std::vector<std::size_t> h3_failures;
  bool h4_ok = false;
  bool unique_max = false;
  bool unique_min = false;
  std::size_t max_witness_gap = 0;  // composed max-source maps constant for gaps >= this
  std::size_t min_witness_gap = 0;
  bool proper() const { return h1_ok && simple_ok && max_source_ok && unique_max && unique_min; }
};

// Certifies unique max/min paths at finite depth by composing the per-level
// source-of-extremal-edge maps and checking the composition becomes constant.
PropernessReport check_properness(const BratteliDiagram& d);

// source of the maximal (resp. minimal) edge into v at level n
std::uint32_t max_edge_source(const OrderedLevel& lv, std::uint32_t v);
std::uint32_t min_edge_source(const OrderedLevel& lv, std::uint32_t v);

// Composed max-source map V_n -> V_m; returns the constant value if the composition is
// constant, nullopt otherwise.
std::optional<std::uint32_t> composed_max_source(const BratteliDiagram& d, std::size_t m,
                                                 std::size_t n);

}  // namespace bv
