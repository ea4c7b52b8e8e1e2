#include "bv/constructions.hpp"

#include <stdexcept>

namespace bv {

namespace {

std::vector<std::uint8_t> repeat_then(std::uint8_t fill, std::size_t count, std::uint8_t last) {
  std::vector<std::uint8_t> out(count, fill);
  out.push_back(last);
  return out;
}

OrderedLevel sturmian_level(const Int& a_big, std::size_t level) {
  if (a_big < 1) throw std::invalid_argument("sturmian: coefficients must be >= 1");
  if (a_big > 1000000) throw std::invalid_argument("sturmian: coefficient too large to materialize");
  std::size_t a = a_big.get_ui();
  OrderedLevel lv;
  lv.source_count = 2;
  lv.target_count = 2;
  lv.orders.resize(2);
  if (level == 2) {
    lv.orders[0] = repeat_then(0, a, 1);
    lv.orders[1] = repeat_then(0, a - 1, 1);
  } else if (a >= 2) {
    lv.orders[0] = repeat_then(1, a, 0);
    lv.orders[1] = repeat_then(1, a - 1, 0);
  } else {
    lv.orders[0] = (level % 2 == 0) ? std::vector<std::uint8_t>{1, 0}
                                    : std::vector<std::uint8_t>{0, 1};
    lv.orders[1] = {0};
  }
  return lv;
}

Int cf_at(const DiagramFamily& fam, std::size_t k) {
  if (k <= fam.cf_prefix.size()) return fam.cf_prefix[k - 1];
  if (fam.cf_cycle.empty())
    throw std::runtime_error("sturmian: continued fraction has no coefficient " + std::to_string(k));
  return fam.cf_cycle[(k - 1 - fam.cf_prefix.size()) % fam.cf_cycle.size()];
}

}  // namespace

BratteliDiagram sturmian(const AngleSpec& cf, std::size_t depth, bool simplify) {
  if (cf.kind() != AngleSpec::Kind::ContinuedFraction)
    throw std::invalid_argument("sturmian: angle must be a (non-terminating) continued fraction");
  if (depth < 2) throw std::invalid_argument("sturmian: depth must be >= 2");

  DiagramFamily fam;
  fam.name = "sturmian";
  fam.cf_prefix = cf.cf_prefix();
  fam.cf_cycle = cf.cf_cycle();
  fam.periodic = true;
  auto prefix = fam.cf_prefix;
  auto cycle = fam.cf_cycle;
  fam.make_level = [prefix, cycle](std::size_t level) {
    DiagramFamily f;
    f.cf_prefix = prefix;
    f.cf_cycle = cycle;
    return sturmian_level(cf_at(f, level - 1), level);
  };

  std::vector<OrderedLevel> levels;
  levels.reserve(depth - 1);
  for (std::size_t n = 2; n <= depth; ++n) levels.push_back(fam.make_level(n));
  BratteliDiagram d({Int(1), Int(1)}, std::move(levels), fam);
  if (!simplify) return d;

  // merge zero-entry levels with their successor (gaps of length <= 2)
  std::vector<std::size_t> cuts{0, 1};
  std::size_t c = 1;
  while (c < d.depth()) {
    std::size_t next = c + 1;
    if (!d.h2_positive(next) && next < d.depth()) next = c + 2;
    cuts.push_back(next);
    c = next;
  }
  return telescope(d, cuts);
}

BratteliDiagram odometer(const std::vector<Int>& q, bool periodic, std::size_t depth) {
  if (q.empty()) throw std::invalid_argument("odometer: empty characteristic sequence");
  for (const auto& qk : q)
    if (qk < 2) throw std::invalid_argument("odometer: characteristic numbers must be >= 2");
  if (depth < 2) throw std::invalid_argument("odometer: depth must be >= 2");

  DiagramFamily fam;
  fam.name = "odometer";
  fam.edge_counts = q;
  fam.periodic = periodic;
  auto counts = q;
  fam.make_level = [counts, periodic](std::size_t level) {
    std::size_t idx = level - 2;
    if (idx >= counts.size()) {
      if (!periodic)
        throw std::runtime_error("odometer: characteristic sequence exhausted at level " +
                                 std::to_string(level));
      idx %= counts.size();
    }
    OrderedLevel lv;
    lv.source_count = 1;
    lv.target_count = 1;
    lv.orders = {std::vector<std::uint8_t>(counts[idx].get_ui(), 0)};
    return lv;
  };

  std::vector<OrderedLevel> levels;
  for (std::size_t n = 2; n <= depth; ++n) levels.push_back(fam.make_level(n));
  return BratteliDiagram({Int(1)}, std::move(levels), fam);
}

BratteliDiagram toeplitz_type(std::vector<Int> hat, std::vector<OrderedLevel> levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& lv = levels[i];
    std::size_t q = lv.orders.empty() ? 0 : lv.orders[0].size();
    for (std::uint32_t v = 0; v < lv.target_count; ++v)
      if (lv.orders[v].size() != q)
        throw std::invalid_argument("toeplitz_type: unequal path number at level " +
                                    std::to_string(i + 2) + ", vertex " + std::to_string(v));
  }
  DiagramFamily fam;
  fam.name = "toeplitz";
  for (const auto& lv : levels) fam.edge_counts.emplace_back(lv.orders[0].size());
  fam.periodic = false;
  return BratteliDiagram(std::move(hat), std::move(levels), fam);
}

BratteliDiagram toeplitz_canonical(std::uint32_t vertices, const std::vector<Int>& q,
                                   bool periodic, std::size_t depth) {
  if (vertices == 0 || vertices > 255) throw std::invalid_argument("toeplitz: bad vertex count");
  for (const auto& qk : q)
    if (qk < 2) throw std::invalid_argument("toeplitz: characteristic numbers must be >= 2");
  if (depth < 2) throw std::invalid_argument("toeplitz: depth must be >= 2");

  DiagramFamily fam;
  fam.name = "toeplitz";
  fam.edge_counts = q;
  fam.periodic = periodic;
  auto counts = q;
  std::uint32_t d_count = vertices;
  fam.make_level = [counts, periodic, d_count](std::size_t level) {
    std::size_t idx = level - 2;
    if (idx >= counts.size()) {
      if (!periodic)
        throw std::runtime_error("toeplitz: characteristic sequence exhausted at level " +
                                 std::to_string(level));
      idx %= counts.size();
    }
    unsigned long qk = counts[idx].get_ui();
    OrderedLevel lv;
    lv.source_count = d_count;
    lv.target_count = d_count;
    lv.orders.resize(d_count);
    for (std::uint32_t v = 0; v < d_count; ++v) {
      lv.orders[v].reserve(qk);
      for (unsigned long j = 0; j < qk; ++j)
        lv.orders[v].push_back(static_cast<std::uint8_t>((v + j) % d_count));
    }
    return lv;
  };

  std::vector<OrderedLevel> levels;
  for (std::size_t n = 2; n <= depth; ++n) levels.push_back(fam.make_level(n));
  std::vector<Int> hat(vertices, Int(1));
  return BratteliDiagram(std::move(hat), std::move(levels), fam);
}

BratteliDiagram stationary(const OrderedLevel& level_template, std::size_t depth) {
  if (level_template.source_count != level_template.target_count)
    throw std::invalid_argument("stationary: template must be square (dimension mismatch)");
  level_template.validate();
  if (!level_template.positive())
    throw std::invalid_argument("stationary: template incidence matrix must be positive");
  if (depth < 2) throw std::invalid_argument("stationary: depth must be >= 2");

  DiagramFamily fam;
  fam.name = "stationary";
  fam.periodic = true;
  OrderedLevel tmpl = level_template;
  fam.make_level = [tmpl](std::size_t) { return tmpl; };

  std::vector<OrderedLevel> levels(depth - 1, level_template);
  std::vector<Int> hat(level_template.source_count, Int(1));
  return BratteliDiagram(std::move(hat), std::move(levels), fam);
}

std::vector<Int> characteristic_sequence(const BratteliDiagram& d) {
  std::vector<Int> out;
  out.reserve(d.depth() - 1);
  for (std::size_t n = 2; n <= d.depth(); ++n) {
    const auto& lv = d.level(n);
    std::size_t q = lv.orders[0].size();
    for (std::uint32_t v = 1; v < lv.target_count; ++v)
      if (lv.orders[v].size() != q)
        throw std::runtime_error("characteristic_sequence: not Toeplitz-type at level " +
                                 std::to_string(n) + ", vertex " + std::to_string(v));
    out.emplace_back(q);
  }
  return out;
}

std::vector<Int> sturmian_cf_denominators(const BratteliDiagram& d, std::size_t n) {
  if (!d.family() || d.family()->name != "sturmian")
    throw std::invalid_argument("sturmian_cf_denominators: not a sturmian-family diagram");
  std::vector<Int> q{Int(1)};  // q_0
  Int q_prev(0);               // q_{-1}
  for (std::size_t k = 1; k <= n; ++k) {
    Int a = cf_at(*d.family(), k);
    Int qk = a * q.back() + q_prev;
    q_prev = q.back();
    q.push_back(qk);
  }
  return q;
}

}  // namespace bv
