#include "bv/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

#include "bv/transcendental.hpp"

namespace bv {

namespace {

Int hat_entry(const BratteliDiagram& d, std::uint32_t v) { return d.hat()[v]; }

std::size_t order_list_size(const BratteliDiagram& d, std::size_t level, std::uint32_t v) {
  if (level == 1) return hat_entry(d, v).get_ui();
  return d.level(level).orders[v].size();
}

}  // namespace

std::vector<std::uint32_t> path_vertices(const BratteliDiagram& d, const PathPoint& x) {
  std::vector<std::uint32_t> vs(x.depth() + 1, 0);
  if (x.depth() == 0) return vs;
  vs[x.depth()] = x.last_vertex;
  for (std::size_t k = x.depth(); k >= 2; --k)
    vs[k - 1] = d.level(k).orders[vs[k]][x.ranks[k - 1]];
  vs[0] = 0;
  return vs;
}

std::uint32_t path_vertex(const BratteliDiagram& d, const PathPoint& x, std::size_t n) {
  if (n > x.depth()) throw std::out_of_range("path_vertex: level beyond prefix");
  return path_vertices(d, x)[n];
}

void validate_path(const BratteliDiagram& d, const PathPoint& x) {
  if (x.depth() == 0) throw std::invalid_argument("PathPoint: empty prefix");
  if (x.depth() > d.depth()) throw std::invalid_argument("PathPoint: prefix deeper than diagram");
  if (x.last_vertex >= d.vertex_count(x.depth()))
    throw std::invalid_argument("PathPoint: last vertex out of range");
  std::uint32_t v = x.last_vertex;
  for (std::size_t k = x.depth(); k >= 2; --k) {
    const auto& list = d.level(k).orders[v];
    if (x.ranks[k - 1] >= list.size())
      throw std::invalid_argument("PathPoint: rank out of range at level " + std::to_string(k));
    v = list[x.ranks[k - 1]];
  }
  if (Int(x.ranks[0]) >= hat_entry(d, v))
    throw std::invalid_argument("PathPoint: hat rank out of range");
}

PathPoint minimal_path_into(const BratteliDiagram& d, std::size_t n, std::uint32_t v,
                            TailPolicy tail) {
  PathPoint x;
  x.ranks.assign(n, 0);
  x.last_vertex = v;
  x.tail = tail;
  return x;
}

PathPoint maximal_path_into(const BratteliDiagram& d, std::size_t n, std::uint32_t v,
                            TailPolicy tail) {
  PathPoint x;
  x.ranks.resize(n);
  x.last_vertex = v;
  x.tail = tail;
  std::uint32_t cur = v;
  for (std::size_t k = n; k >= 2; --k) {
    const auto& list = d.level(k).orders[cur];
    x.ranks[k - 1] = static_cast<std::uint32_t>(list.size() - 1);
    cur = list.back();
  }
  x.ranks[0] = static_cast<std::uint32_t>(hat_entry(d, cur).get_ui() - 1);
  return x;
}

namespace {

// first level whose edge is not maximal, 0 if the whole prefix is maximal
std::size_t first_non_maximal(const BratteliDiagram& d, const PathPoint& x) {
  auto vs = path_vertices(d, x);
  for (std::size_t k = 1; k <= x.depth(); ++k)
    if (x.ranks[k - 1] + 1 < order_list_size(d, k, vs[k])) return k;
  return 0;
}

// extend an all-maximal-prefix point one level along its tail policy
PathPoint extend_along_tail(const BratteliDiagram& d, const PathPoint& x) {
  std::size_t next = x.depth() + 1;
  const auto& lv = d.level(next);
  bool maximal = x.tail == TailPolicy::AllMaximal;
  for (std::uint32_t t = 0; t < lv.target_count; ++t) {
    std::uint32_t src = maximal ? max_edge_source(lv, t) : min_edge_source(lv, t);
    if (src == x.last_vertex) {
      PathPoint y = x;
      y.ranks.push_back(maximal ? static_cast<std::uint32_t>(lv.orders[t].size() - 1) : 0);
      y.last_vertex = t;
      return y;
    }
  }
  throw std::runtime_error("PathPoint: tail policy has no consistent continuation at level " +
                           std::to_string(next));
}

}  // namespace

bool successor_resolvable(const BratteliDiagram& d, const PathPoint& x) {
  if (first_non_maximal(d, x) != 0) return true;
  if (x.tail == TailPolicy::Explicit) return false;
  if (x.depth() < d.depth()) return true;  // extend within the stored diagram
  if (x.tail == TailPolicy::AllMaximal) return d.vertex_count(x.depth()) == 1;
  return false;
}

PathPoint vershik_successor(const BratteliDiagram& d, const PathPoint& x) {
  std::size_t k = first_non_maximal(d, x);
  if (k != 0) {
    auto vs = path_vertices(d, x);
    PathPoint y = x;
    y.ranks[k - 1] += 1;
    // reset below to the minimal path into the advanced edge's source
    if (k >= 2) {
      std::uint32_t src = d.level(k).orders[vs[k]][y.ranks[k - 1]];
      for (std::size_t j = 0; j + 1 < k; ++j) y.ranks[j] = 0;
      (void)src;  // ranks 0 encode the minimal path into whatever source the new edge has
    }
    return y;
  }

  // all-maximal prefix
  if (x.tail == TailPolicy::Explicit)
    throw std::runtime_error("vershik_successor: cannot resolve successor at depth " +
                             std::to_string(x.depth()) + " (all-maximal explicit prefix)");
  if (x.depth() < d.depth()) return vershik_successor(d, extend_along_tail(d, x));
  if (x.tail == TailPolicy::AllMaximal) {
    // the point is x_max; its image is x_min, resolvable here only if the deepest
    // vertex of the minimal thread is pinned by the stored diagram
    if (d.vertex_count(x.depth()) == 1)
      return minimal_path_into(d, x.depth(), 0, TailPolicy::AllMinimal);
  }
  throw std::runtime_error("vershik_successor: cannot resolve successor at depth " +
                           std::to_string(x.depth()));
}

std::vector<Int> suffix_vector(const BratteliDiagram& d, const PathPoint& x, std::size_t m,
                               std::size_t n) {
  if (m < 1 || m >= n || n > x.depth()) throw std::out_of_range("suffix_vector: range violation");
  auto vs = path_vertices(d, x);
  std::size_t dm = d.vertex_count(m);
  std::vector<Int> s(dm, Int(0));
  IntMatrix P = IntMatrix::identity(dm);  // P_{m,i-1} while scanning level i
  for (std::size_t i = m + 1; i <= n; ++i) {
    const auto& list = d.level(i).orders[vs[i]];
    for (std::size_t r = x.ranks[i - 1] + 1; r < list.size(); ++r) {
      std::uint32_t u2 = list[r];
      for (std::size_t u = 0; u < dm; ++u) s[u] += P(u, u2);
    }
    if (i < n) P = P * d.incidence_matrix(i);
  }
  return s;
}

Int suffix_scalar0(const BratteliDiagram& d, const PathPoint& x) {
  auto vs = path_vertices(d, x);
  return hat_entry(d, vs[1]) - 1 - Int(x.ranks[0]);
}

Int entrance_time(const BratteliDiagram& d, const PathPoint& x, std::size_t n) {
  if (n < 1 || n > x.depth()) throw std::out_of_range("entrance_time: range violation");
  Int r = suffix_scalar0(d, x);
  for (std::size_t i = 1; i + 1 <= n; ++i)
    r += inner(suffix_vector(d, x, i, i + 1), d.heights(i));
  return r;
}

namespace {

// suffix vectors read off an order list of level-m sources: entry j = counts of each
// source strictly after position j
std::set<std::vector<Int>> suffix_values_of_list(const std::vector<std::uint8_t>& list,
                                                 std::size_t source_count, std::uint8_t only_src,
                                                 bool filter_src) {
  std::set<std::vector<Int>> out;
  std::vector<Int> counts(source_count, Int(0));
  for (std::size_t j = list.size(); j-- > 0;) {
    if (!filter_src || list[j] == only_src) out.insert(counts);
    counts[list[j]] += 1;
  }
  return out;
}

}  // namespace

std::set<std::vector<Int>> suffix_set(const BratteliDiagram& d, std::size_t n, std::uint32_t u,
                                      std::uint32_t v) {
  if (n + 1 > d.depth()) throw std::out_of_range("suffix_set: level out of range");
  const auto& lv = d.level(n + 1);
  if (u >= lv.source_count || v >= lv.target_count)
    throw std::out_of_range("suffix_set: vertex out of range");
  return suffix_values_of_list(lv.orders[v], lv.source_count, static_cast<std::uint8_t>(u), true);
}

std::set<std::vector<Int>> suffix_set_range(const BratteliDiagram& d, std::size_t m,
                                            std::size_t n, std::uint32_t u, std::uint32_t v,
                                            std::size_t cap) {
  if (m >= n || n > d.depth()) throw std::out_of_range("suffix_set_range: range violation");
  IntMatrix P = d.product_matrix(m, n);
  Int total(0);
  for (std::size_t w = 0; w < P.rows(); ++w) total += P(w, v);
  if (total > Int(static_cast<unsigned long>(cap)))
    throw std::runtime_error("suffix_set_range: " + total.get_str() +
                             " paths exceed cap " + std::to_string(cap));
  auto list = induced_order_list(d, m, n, v);
  return suffix_values_of_list(list, d.vertex_count(m), static_cast<std::uint8_t>(u), true);
}

std::vector<PathPoint> enumerate_tower_paths(const BratteliDiagram& d, std::size_t n,
                                             std::uint32_t v, std::size_t cap) {
  if (n < 1 || n > d.depth()) throw std::out_of_range("enumerate_tower_paths: level out of range");
  const Int& h = d.heights(n)[v];
  if (h > Int(static_cast<unsigned long>(cap)))
    throw std::runtime_error("enumerate_tower_paths: tower height " + h.get_str() +
                             " exceeds cap " + std::to_string(cap) +
                             " (raise the cap to enumerate)");

  // rank tuples in ascending induced order, built level by level
  std::vector<std::vector<std::vector<std::uint32_t>>> tuples(d.vertex_count(1));
  for (std::uint32_t u = 0; u < tuples.size(); ++u) {
    unsigned long hu = hat_entry(d, u).get_ui();
    tuples[u].reserve(hu);
    for (unsigned long r = 0; r < hu; ++r) tuples[u].push_back({static_cast<std::uint32_t>(r)});
  }
  for (std::size_t k = 2; k <= n; ++k) {
    const auto& lv = d.level(k);
    std::vector<std::vector<std::vector<std::uint32_t>>> next(lv.target_count);
    for (std::uint32_t t = 0; t < lv.target_count; ++t) {
      if (k == n && t != v) continue;
      for (std::size_t r = 0; r < lv.orders[t].size(); ++r) {
        for (const auto& stem : tuples[lv.orders[t][r]]) {
          auto tup = stem;
          tup.push_back(static_cast<std::uint32_t>(r));
          next[t].push_back(std::move(tup));
        }
      }
    }
    tuples = std::move(next);
  }

  std::vector<PathPoint> out;
  out.reserve(tuples[v].size());
  for (auto& tup : tuples[v]) {
    PathPoint p;
    p.ranks = std::move(tup);
    p.last_vertex = v;
    p.tail = TailPolicy::Explicit;
    out.push_back(std::move(p));
  }
  return out;
}

Matrix<ComplexInterval> twisted_level_matrix(const BratteliDiagram& d, std::size_t n,
                                             const AngleSpec& alpha, const Rat& eps) {
  const auto& lv = d.level(n + 1);
  const auto& h = d.heights(n);

  // per-source phase alpha * h_n(u) mod 1
  std::vector<Interval> phase(lv.source_count);
  for (std::uint32_t u = 0; u < lv.source_count; ++u)
    phase[u] = angle_times(alpha, h[u], eps);

  Matrix<ComplexInterval> F(lv.source_count, lv.target_count,
                            ComplexInterval::exact(Rat(0), Rat(0)));
  for (std::uint32_t v = 0; v < lv.target_count; ++v) {
    const auto& list = lv.orders[v];
    Interval acc(Rat(0));  // phase of the suffix seen from the current position
    for (std::size_t j = list.size(); j-- > 0;) {
      std::uint32_t u = list[j];
      F(u, v) = F(u, v) + unit_phase(acc, eps);
      acc = acc + phase[u];
      if (acc.lo >= 1) {  // keep numerators small
        Rat shift(rat_floor(acc.lo));
        acc = Interval(acc.lo - shift, acc.hi - shift);
      }
    }
  }
  return F;
}

Matrix<ComplexInterval> transfer_matrix(const BratteliDiagram& d, std::size_t m, std::size_t n,
                                        const AngleSpec& alpha, const Rat& budget) {
  if (m >= n || n > d.depth()) throw std::out_of_range("transfer_matrix: range violation");
  Rat eps = budget / 64;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix<ComplexInterval> F = twisted_level_matrix(d, m, alpha, eps);
    for (std::size_t k = m + 1; k < n; ++k) F = F * twisted_level_matrix(d, k, alpha, eps);
    Rat worst(0);
    for (std::size_t i = 0; i < F.rows(); ++i)
      for (std::size_t j = 0; j < F.cols(); ++j) worst = std::max(worst, F(i, j).width());
    if (worst <= budget) return F;
    eps = eps / 64;
  }
  throw std::runtime_error("transfer_matrix: could not reach requested width budget");
}

}  // namespace bv
