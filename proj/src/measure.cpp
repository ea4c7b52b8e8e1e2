#include "bv/measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace bv {

const std::vector<Interval>& MeasureEnclosure::at_level(std::size_t n) const {
  if (n < 1 || n > audited_depth) throw std::out_of_range("MeasureEnclosure: level out of range");
  return mu[n - 1];
}

std::vector<MeasureEnclosure> invariant_measures(const BratteliDiagram& d, std::size_t depth,
                                                 const Rat& tol) {
  if (depth < 2) throw std::invalid_argument("invariant_measures: depth must be >= 2");
  if (depth > d.depth()) throw std::out_of_range("invariant_measures: depth exceeds stored depth");

  std::size_t dn = d.vertex_count(depth);
  const auto& hN = d.heights(depth);

  // images[v][m-1] = P_{m,N} e_v / h_N(v), exact rational vectors
  std::vector<std::vector<std::vector<Rat>>> images(dn);
  for (std::uint32_t v = 0; v < dn; ++v) {
    images[v].resize(depth);
    std::vector<Rat> col(dn, Rat(0));
    col[v] = make_rat(Int(1), hN[v]);
    images[v][depth - 1] = col;
    for (std::size_t m = depth; m-- > 1;) {
      const IntMatrix& M = d.incidence_matrix(m + 1);
      std::vector<Rat> up(d.vertex_count(m), Rat(0));
      for (std::size_t i = 0; i < up.size(); ++i)
        for (std::size_t j = 0; j < images[v][m].size(); ++j)
          up[i] += Rat(M(i, j)) * images[v][m][j];
      images[v][m - 1] = std::move(up);
    }
  }

  // cluster by level-1 image distance
  std::vector<std::vector<std::uint32_t>> clusters;
  for (std::uint32_t v = 0; v < dn; ++v) {
    bool placed = false;
    for (auto& cluster : clusters) {
      Rat dist(0);
      const auto& a = images[v][0];
      const auto& b = images[cluster.front()][0];
      for (std::size_t i = 0; i < a.size(); ++i) dist = std::max(dist, rat_abs(a[i] - b[i]));
      if (dist < tol) {
        cluster.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({v});
  }

  std::vector<MeasureEnclosure> out;
  out.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    MeasureEnclosure enc;
    enc.audited_depth = depth;
    enc.extreme_points = cluster;
    enc.ergodic_hint = clusters.size();
    enc.mu.resize(depth);
    for (std::size_t m = 1; m <= depth; ++m) {
      std::size_t dm = d.vertex_count(m);
      enc.mu[m - 1].reserve(dm);
      for (std::size_t i = 0; i < dm; ++i) {
        Rat lo = images[cluster.front()][m - 1][i], hi = lo;
        for (auto v : cluster) {
          lo = std::min(lo, images[v][m - 1][i]);
          hi = std::max(hi, images[v][m - 1][i]);
        }
        enc.mu[m - 1].emplace_back(lo, hi);
      }
    }
    out.push_back(std::move(enc));
  }
  return out;
}

std::vector<Interval> tower_mass(const BratteliDiagram& d, const MeasureEnclosure& mu,
                                 std::size_t n) {
  const auto& mun = mu.at_level(n);
  const auto& h = d.heights(n);
  std::vector<Interval> out;
  out.reserve(mun.size());
  for (std::size_t v = 0; v < mun.size(); ++v) out.push_back(Rat(h[v]) * mun[v]);
  return out;
}

Rat default_clean_cutoff(const BratteliDiagram& d, const MeasureEnclosure& mu) {
  Rat total(0);
  std::size_t terms = 0;
  for (std::size_t n = 1; n <= mu.audited_depth; ++n)
    for (const auto& m : tower_mass(d, mu, n)) {
      total += m.mid();
      ++terms;
    }
  Rat avg = total / Rat(static_cast<unsigned long>(terms));
  Rat dmax(0);
  for (std::size_t n = 1; n <= mu.audited_depth; ++n)
    dmax = std::max(dmax, Rat(static_cast<unsigned long>(d.vertex_count(n))));
  return avg / (2 * dmax);
}

CleanReport clean_report(const BratteliDiagram& d, const MeasureEnclosure& mu, const Rat& cutoff) {
  if (mu.audited_depth < 3) throw std::invalid_argument("clean_report: audited depth must be >= 3");
  CleanReport r;
  r.cutoff = cutoff;
  r.first_level = 1;
  // the hull near the audit depth is spanned by raw extreme points and carries no
  // contraction yet; audit down from depth-1 only while the masses are resolved
  // finely enough to compare against the cutoff
  std::size_t last = mu.audited_depth - 1;
  while (last > 3) {
    Rat w(0);
    for (const auto& m : tower_mass(d, mu, last)) w = std::max(w, m.width());
    if (w <= cutoff / 2) break;
    --last;
  }
  for (std::size_t n = 1; n <= last; ++n) r.masses.push_back(tower_mass(d, mu, n));

  std::size_t dmax = d.vertex_count(last);
  bool have_delta = false;
  for (std::uint32_t v = 0; v < dmax; ++v) {
    bool stays = true;
    for (const auto& level_masses : r.masses) {
      if (v >= level_masses.size()) continue;  // rank can vary before H4 kicks in
      if (!(level_masses[v].lo >= cutoff)) {
        stays = false;
        break;
      }
    }
    if (stays) {
      r.i_mu.push_back(v);
      for (const auto& level_masses : r.masses)
        if (v < level_masses.size()) {
          r.delta0 = have_delta ? interval_min(r.delta0, level_masses[v]) : level_masses[v];
          have_delta = true;
        }
    }
  }
  r.exact_rank = r.i_mu.size() == dmax;
  return r;
}

MarkovKernel markov_kernel(const BratteliDiagram& d, const MeasureEnclosure& mu, std::size_t m,
                           std::size_t n) {
  if (m < 1 || m >= n || n > mu.audited_depth)
    throw std::out_of_range("markov_kernel: range violation");
  const auto& mum = mu.at_level(m);
  const auto& mun = mu.at_level(n);
  for (const auto& e : mum)
    if (e.lo <= 0)
      throw std::domain_error("markov_kernel: mu_m enclosure touches 0; conditional undefined");

  IntMatrix P = d.product_matrix(m, n);
  MarkovKernel k;
  k.m = m;
  k.n = n;
  k.q = Matrix<Interval>(P.rows(), P.cols(), Interval(Rat(0)));
  bool first = true;
  for (std::size_t u = 0; u < P.rows(); ++u)
    for (std::size_t v = 0; v < P.cols(); ++v) {
      k.q(u, v) = interval_div(mun[v] * Interval(Rat(P(u, v))), mum[u]);
      k.zeta = first ? k.q(u, v) : interval_min(k.zeta, k.q(u, v));
      first = false;
    }
  k.zeta = Rat(1) - k.zeta;
  return k;
}

}  // namespace bv
