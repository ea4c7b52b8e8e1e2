#include "bv/diagram.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bv {

void OrderedLevel::validate() const {
  if (source_count == 0 || target_count == 0)
    throw std::invalid_argument("OrderedLevel: empty vertex set");
  if (source_count > 255)
    throw std::invalid_argument("OrderedLevel: more than 255 vertices per level is unsupported");
  if (orders.size() != target_count)
    throw std::invalid_argument("OrderedLevel: order list count != target count");
  std::vector<bool> used(source_count, false);
  for (std::uint32_t v = 0; v < target_count; ++v) {
    if (orders[v].empty())
      throw std::invalid_argument("OrderedLevel: target " + std::to_string(v) +
                                  " has no incoming edges");
    for (auto u : orders[v]) {
      if (u >= source_count)
        throw std::invalid_argument("OrderedLevel: source index out of range");
      used[u] = true;
    }
  }
  for (std::uint32_t u = 0; u < source_count; ++u)
    if (!used[u])
      throw std::invalid_argument("OrderedLevel: source " + std::to_string(u) +
                                  " has no outgoing edges");
}

IntMatrix OrderedLevel::incidence() const {
  IntMatrix m(source_count, target_count, Int(0));
  for (std::uint32_t v = 0; v < target_count; ++v)
    for (auto u : orders[v]) m(u, v) += 1;
  return m;
}

bool OrderedLevel::positive() const {
  IntMatrix m = incidence();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) == 0) return false;
  return true;
}

BratteliDiagram::BratteliDiagram(std::vector<Int> hat, std::vector<OrderedLevel> levels,
                                 std::optional<DiagramFamily> family)
    : hat_(std::move(hat)), levels_(std::move(levels)), family_(std::move(family)) {
  if (hat_.empty()) throw std::invalid_argument("BratteliDiagram: empty hat");
  for (const auto& h : hat_)
    if (h < 1) throw std::invalid_argument("BratteliDiagram: hat entries must be >= 1");

  std::size_t prev = hat_.size();
  incidence_.reserve(levels_.size());
  heights_.reserve(levels_.size() + 1);
  heights_.push_back(hat_);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& lv = levels_[i];
    lv.validate();
    if (lv.source_count != prev)
      throw std::invalid_argument("BratteliDiagram: level " + std::to_string(i + 2) +
                                  " source count does not match previous level");
    incidence_.push_back(lv.incidence());
    heights_.push_back(heights_.back() * incidence_.back());
    prev = lv.target_count;
  }
}

std::size_t BratteliDiagram::vertex_count(std::size_t level) const {
  if (level < 1 || level > depth()) throw std::out_of_range("vertex_count: level out of range");
  return level == 1 ? hat_.size() : levels_[level - 2].target_count;
}

const OrderedLevel& BratteliDiagram::level(std::size_t n) const {
  if (n < 2 || n > depth()) throw std::out_of_range("level: out of range");
  return levels_[n - 2];
}

const IntMatrix& BratteliDiagram::incidence_matrix(std::size_t n) const {
  if (n < 2 || n > depth()) throw std::out_of_range("incidence_matrix: level out of range");
  return incidence_[n - 2];
}

IntMatrix BratteliDiagram::product_matrix(std::size_t m, std::size_t n) const {
  if (m < 1 || m > n || n > depth()) throw std::out_of_range("product_matrix: range violation");
  IntMatrix p = IntMatrix::identity(vertex_count(m));
  for (std::size_t k = m + 1; k <= n; ++k) p = p * incidence_matrix(k);
  return p;
}

const std::vector<Int>& BratteliDiagram::heights(std::size_t n) const {
  if (n < 1 || n > depth()) throw std::out_of_range("heights: level out of range");
  return heights_[n - 1];
}

BratteliDiagram BratteliDiagram::deepened(std::size_t target_depth) const {
  if (target_depth <= depth()) return *this;
  if (!can_deepen())
    throw std::runtime_error("deepened: no generator installed; stored depth is " +
                             std::to_string(depth()));
  std::vector<OrderedLevel> lv = levels_;
  for (std::size_t n = depth() + 1; n <= target_depth; ++n)
    lv.push_back(family_->make_level(n));
  return BratteliDiagram(hat_, std::move(lv), family_);
}

bool BratteliDiagram::h1_unit_hat() const {
  return std::all_of(hat_.begin(), hat_.end(), [](const Int& h) { return h == 1; });
}

bool BratteliDiagram::h2_positive(std::size_t n) const { return level(n).positive(); }

bool BratteliDiagram::h4_constant_rank() const {
  for (std::size_t n = 2; n <= depth(); ++n)
    if (vertex_count(n) != vertex_count(1)) return false;
  return true;
}

std::uint32_t max_edge_source(const OrderedLevel& lv, std::uint32_t v) {
  return lv.orders[v].back();
}
std::uint32_t min_edge_source(const OrderedLevel& lv, std::uint32_t v) {
  return lv.orders[v].front();
}

namespace {

// compose per-level source maps down from level n to level m
std::vector<std::uint32_t> composed_map(const BratteliDiagram& d, std::size_t m, std::size_t n,
                                        bool maximal) {
  std::vector<std::uint32_t> map(d.vertex_count(n));
  for (std::size_t v = 0; v < map.size(); ++v) map[v] = static_cast<std::uint32_t>(v);
  for (std::size_t k = n; k > m; --k) {
    const auto& lv = d.level(k);
    for (auto& v : map) v = maximal ? max_edge_source(lv, v) : min_edge_source(lv, v);
  }
  return map;
}

bool is_constant(const std::vector<std::uint32_t>& v) {
  return std::all_of(v.begin(), v.end(), [&](std::uint32_t x) { return x == v.front(); });
}

// smallest g such that every composed map with gap >= g (within depth) is constant;
// 0 if none works
std::size_t constant_gap(const BratteliDiagram& d, bool maximal) {
  std::size_t depth = d.depth();
  for (std::size_t g = 1; g < depth; ++g) {
    bool ok = true;
    for (std::size_t m = 1; m + g <= depth; ++m)
      if (!is_constant(composed_map(d, m, m + g, maximal))) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 0;
}

}  // namespace

std::optional<std::uint32_t> composed_max_source(const BratteliDiagram& d, std::size_t m,
                                                 std::size_t n) {
  auto map = composed_map(d, m, n, true);
  if (!is_constant(map)) return std::nullopt;
  return map.front();
}

PropernessReport check_properness(const BratteliDiagram& d) {
  if (d.depth() < 2) throw std::invalid_argument("check_properness: depth must be >= 2");
  PropernessReport r;
  r.h1_ok = d.h1_unit_hat();
  r.h4_ok = d.h4_constant_rank();

  r.simple_ok = true;
  r.max_source_ok = true;
  for (std::size_t n = 2; n <= d.depth(); ++n) {
    if (!d.h2_positive(n)) {
      r.simple_ok = false;
      r.h2_failures.push_back(n);
    }
    const auto& lv = d.level(n);
    std::uint32_t s0 = max_edge_source(lv, 0);
    for (std::uint32_t v = 1; v < lv.target_count; ++v)
      if (max_edge_source(lv, v) != s0) {
        r.max_source_ok = false;
        r.h3_failures.push_back(n);
        break;
      }
  }

  r.max_witness_gap = constant_gap(d, true);
  r.min_witness_gap = constant_gap(d, false);
  r.unique_max = r.max_witness_gap != 0;
  r.unique_min = r.min_witness_gap != 0;
  return r;
}

std::vector<std::uint8_t> induced_order_list(const BratteliDiagram& d, std::size_t m,
                                             std::size_t n, std::uint32_t v) {
  if (m >= n || n > d.depth()) throw std::out_of_range("induced_order_list: range violation");
  // lists[u] = induced order list of paths from V_m into u at the current level,
  // recorded as level-m source vertices; extended one level at a time
  std::vector<std::vector<std::uint8_t>> lists(d.vertex_count(m));
  for (std::size_t u = 0; u < lists.size(); ++u)
    lists[u] = {static_cast<std::uint8_t>(u)};
  for (std::size_t k = m + 1; k <= n; ++k) {
    const auto& lv = d.level(k);
    std::vector<std::vector<std::uint8_t>> next;
    if (k < n) {
      next.resize(lv.target_count);
    } else {
      next.resize(lv.target_count);  // only v is needed, but keep indices aligned
    }
    auto expand = [&](std::uint32_t tgt) {
      std::vector<std::uint8_t> out;
      std::size_t total = 0;
      for (auto src : lv.orders[tgt]) total += lists[src].size();
      out.reserve(total);
      // last-difference order: lower-ranked edge at level k comes first, and within a
      // fixed edge the order of the prefix below applies
      for (auto src : lv.orders[tgt]) out.insert(out.end(), lists[src].begin(), lists[src].end());
      return out;
    };
    if (k < n) {
      for (std::uint32_t t = 0; t < lv.target_count; ++t) next[t] = expand(t);
    } else {
      next[v] = expand(v);
    }
    lists = std::move(next);
  }
  return lists[v];
}

BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& cuts) {
  if (cuts.size() < 2 || cuts.front() != 0)
    throw std::invalid_argument("telescope: cuts must start at 0 and keep at least one level");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1] || cuts[i] > d.depth())
      throw std::invalid_argument("telescope: cuts must be strictly increasing and <= depth");

  // new hat = heights at the first kept level
  std::vector<Int> hat = d.heights(cuts[1]);
  std::vector<OrderedLevel> levels;
  levels.reserve(cuts.size() - 2);
  for (std::size_t i = 2; i < cuts.size(); ++i) {
    std::size_t m = cuts[i - 1], n = cuts[i];
    OrderedLevel lv;
    lv.source_count = static_cast<std::uint32_t>(d.vertex_count(m));
    lv.target_count = static_cast<std::uint32_t>(d.vertex_count(n));
    lv.orders.resize(lv.target_count);
    for (std::uint32_t v = 0; v < lv.target_count; ++v)
      lv.orders[v] = induced_order_list(d, m, n, v);
    levels.push_back(std::move(lv));
  }
  return BratteliDiagram(std::move(hat), std::move(levels));
}

}  // namespace bv
