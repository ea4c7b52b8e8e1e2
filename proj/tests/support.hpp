#pragma once

// Shared fixtures for the test suites: the small-diagram corpus and brute-force
// oracles that are deliberately independent of the library's order machinery.

#include <algorithm>
#include <string>
#include <vector>

#include "bv/constructions.hpp"
#include "bv/diagram.hpp"
#include "bv/dynamics.hpp"

namespace bvtest {

using namespace bv;

inline BratteliDiagram odo2(std::size_t depth = 6) {
  return odometer({Int(2)}, true, depth);
}

inline AngleSpec golden_cf() { return AngleSpec::continued_fraction({}, {Int(1)}); }
inline AngleSpec silver_cf() { return AngleSpec::continued_fraction({}, {Int(2)}); }

inline OrderedLevel two_by_two_level(std::vector<std::uint8_t> t0, std::vector<std::uint8_t> t1) {
  OrderedLevel lv;
  lv.source_count = 2;
  lv.target_count = 2;
  lv.orders = {std::move(t0), std::move(t1)};
  return lv;
}

// two-vertex diagram whose second vertex carries vanishing tower mass
inline BratteliDiagram transient_vertex_diagram() {
  std::vector<OrderedLevel> levels;
  for (std::size_t n = 2; n <= 5; ++n) {
    unsigned k = 1u << n;  // 4, 8, 16, 32
    OrderedLevel lv;
    lv.source_count = 2;
    lv.target_count = 2;
    lv.orders.resize(2);
    for (unsigned j = 0; j < k; ++j) lv.orders[0].push_back(0);
    for (unsigned j = 0; j < k; ++j) lv.orders[0].push_back(1);
    lv.orders[1] = {0, 1};
    levels.push_back(std::move(lv));
  }
  return BratteliDiagram({Int(1), Int(1)}, std::move(levels));
}

// max edges of the two targets start at different sources (H3 violation)
inline BratteliDiagram h3_violation_diagram(std::size_t depth = 5) {
  std::vector<OrderedLevel> levels(depth - 1, two_by_two_level({0, 1}, {1, 0}));
  return BratteliDiagram({Int(1), Int(1)}, std::move(levels));
}

struct CorpusEntry {
  std::string name;
  BratteliDiagram diagram;
};

// >= 10 diagrams, <= 4 vertices per level, depth <= 6, towers <= 5000
inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  out.push_back({"odo2", odo2(6)});
  out.push_back({"odo3", odometer({Int(3)}, true, 5)});
  out.push_back({"odo23", odometer({Int(2), Int(3)}, true, 6)});
  out.push_back({"sturmian_golden", sturmian(golden_cf(), 6)});
  out.push_back({"sturmian_silver", sturmian(silver_cf(), 6)});
  out.push_back({"sturmian_12", sturmian(AngleSpec::continued_fraction({}, {Int(1), Int(2)}), 6)});
  {
    std::vector<OrderedLevel> levels(5, two_by_two_level({0, 1}, {0, 1}));
    out.push_back({"stationary_ones", BratteliDiagram({Int(1), Int(1)}, std::move(levels))});
  }
  {
    OrderedLevel lv;
    lv.source_count = 3;
    lv.target_count = 3;
    lv.orders = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    out.push_back({"stationary_three", stationary(lv, 5)});
  }
  out.push_back({"toeplitz2_q3", toeplitz_canonical(2, {Int(3)}, true, 5)});
  {
    OrderedLevel lv = two_by_two_level({0, 0, 1}, {0, 1});  // M = [[2,1],[1,1]]
    out.push_back({"stationary_211", stationary(lv, 5)});
  }
  out.push_back({"toeplitz4_q5", toeplitz_canonical(4, {Int(5)}, true, 4)});
  out.push_back({"transient", transient_vertex_diagram()});
  out.push_back({"h3_violation", h3_violation_diagram(5)});
  return out;
}

// positive-matrix sub-corpus (H2 everywhere), used by measure/kernel suites
inline std::vector<CorpusEntry> positive_corpus() {
  std::vector<CorpusEntry> out;
  for (auto& e : corpus()) {
    bool pos = true;
    for (std::size_t n = 2; n <= e.diagram.depth(); ++n)
      if (!e.diagram.h2_positive(n)) pos = false;
    if (pos) out.push_back(std::move(e));
  }
  return out;
}

// --- brute-force oracles --------------------------------------------------------

// last-difference comparison of two same-range prefixes, straight from the definition
inline bool oracle_less(const PathPoint& a, const PathPoint& b) {
  for (std::size_t k = a.depth(); k-- > 0;) {
    if (a.ranks[k] != b.ranks[k]) return a.ranks[k] < b.ranks[k];
  }
  return false;
}

// all depth-n prefixes into v, enumerated by raw recursion and sorted with oracle_less
inline std::vector<PathPoint> oracle_tower(const BratteliDiagram& d, std::size_t n,
                                           std::uint32_t v) {
  std::vector<PathPoint> out;
  std::vector<std::uint32_t> ranks(n, 0);

  // depth-first over ranks, deepest level first
  auto rec = [&](auto&& self, std::size_t level, std::uint32_t vertex) -> void {
    if (level == 1) {
      unsigned long h = d.hat()[vertex].get_ui();
      for (unsigned long r = 0; r < h; ++r) {
        ranks[0] = static_cast<std::uint32_t>(r);
        PathPoint p;
        p.ranks.assign(ranks.begin(), ranks.end());
        p.last_vertex = v;
        p.tail = TailPolicy::Explicit;
        out.push_back(std::move(p));
      }
      return;
    }
    const auto& list = d.level(level).orders[vertex];
    for (std::size_t r = 0; r < list.size(); ++r) {
      ranks[level - 1] = static_cast<std::uint32_t>(r);
      self(self, level - 1, list[r]);
    }
  };
  rec(rec, n, v);
  std::sort(out.begin(), out.end(), oracle_less);
  return out;
}

// segments of levels (m, n] ending at v, as (rank tuple, source vertex), sorted ascending
struct OracleSegment {
  std::vector<std::uint32_t> ranks;  // levels m+1..n
  std::uint32_t source;
};

inline std::vector<OracleSegment> oracle_segments(const BratteliDiagram& d, std::size_t m,
                                                  std::size_t n, std::uint32_t v) {
  std::vector<OracleSegment> out;
  std::vector<std::uint32_t> ranks(n - m, 0);
  auto rec = [&](auto&& self, std::size_t level, std::uint32_t vertex) -> void {
    if (level == m) {
      out.push_back({ranks, vertex});
      return;
    }
    const auto& list = d.level(level).orders[vertex];
    for (std::size_t r = 0; r < list.size(); ++r) {
      ranks[level - m - 1] = static_cast<std::uint32_t>(r);
      self(self, level - 1, list[r]);
    }
  };
  rec(rec, n, v);
  std::sort(out.begin(), out.end(), [](const OracleSegment& a, const OracleSegment& b) {
    for (std::size_t k = a.ranks.size(); k-- > 0;)
      if (a.ranks[k] != b.ranks[k]) return a.ranks[k] < b.ranks[k];
    return false;
  });
  return out;
}

// suffix vector of x between m and n by literal counting over enumerated segments
inline std::vector<Int> oracle_suffix(const BratteliDiagram& d, const PathPoint& x, std::size_t m,
                                      std::size_t n) {
  auto vs = path_vertices(d, x);
  auto segs = oracle_segments(d, m, n, vs[n]);
  std::vector<std::uint32_t> mine(x.ranks.begin() + static_cast<std::ptrdiff_t>(m),
                                  x.ranks.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<Int> s(d.vertex_count(m), Int(0));
  for (const auto& seg : segs) {
    bool greater = false;
    for (std::size_t k = seg.ranks.size(); k-- > 0;) {
      if (seg.ranks[k] != mine[k]) {
        greater = seg.ranks[k] > mine[k];
        break;
      }
    }
    if (greater) s[seg.source] += 1;
  }
  return s;
}

// entrance time = number of strictly greater same-tower prefixes
inline Int oracle_entrance(const BratteliDiagram& d, const PathPoint& x, std::size_t n) {
  auto vs = path_vertices(d, x);
  auto tower = oracle_tower(d, n, vs[n]);
  PathPoint probe = x;
  probe.ranks.resize(n);
  probe.last_vertex = vs[n];
  Int count(0);
  for (const auto& p : tower)
    if (oracle_less(probe, p)) count += 1;
  return count;
}

}  // namespace bvtest
