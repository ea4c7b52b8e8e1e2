#include "bv/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace bv {

ModificationResult order_modification(const BratteliDiagram& d,
                                      const std::vector<OrderEdit>& edits) {
  std::vector<Int> hat = d.hat();
  std::vector<OrderedLevel> levels;
  levels.reserve(d.depth() - 1);
  for (std::size_t n = 2; n <= d.depth(); ++n) levels.push_back(d.level(n));

  std::vector<std::size_t> omega(levels.size(), 0);
  for (const auto& e : edits) {
    if (e.level < 2 || e.level > d.depth())
      throw std::invalid_argument("order_modification: level out of range");
    auto& lv = levels[e.level - 2];
    if (e.vertex >= lv.target_count)
      throw std::invalid_argument("order_modification: vertex out of range");
    auto& old = lv.orders[e.vertex];
    std::vector<std::uint8_t> a = old, b = e.new_order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw std::invalid_argument(
          "order_modification: new order is not a permutation of the old source multiset");
    std::size_t changed = 0;
    for (std::size_t i = 0; i < old.size(); ++i)
      if (old[i] != e.new_order[i]) ++changed;
    omega[e.level - 2] = std::max(omega[e.level - 2], changed);
    old = e.new_order;
  }

  // edits invalidate the family generator (it would regrow the original orders)
  BratteliDiagram out(std::move(hat), std::move(levels));
  PropernessReport rep = check_properness(out);
  return {std::move(out), std::move(omega), std::move(rep)};
}

Verdict check_preservation(const BratteliDiagram& d0, const AngleSpec& alpha,
                           const std::vector<Int>& omega, std::size_t depth,
                           const SpectralOptions& opts) {
  if (omega.empty()) throw std::invalid_argument("check_preservation: empty omega sequence");
  BratteliDiagram d = (d0.can_deepen() && d0.depth() < depth + 1) ? d0.deepened(depth + 1) : d0;
  std::size_t n_max = std::min(depth, d.depth() - 1);

  auto omega_at = [&](std::size_t level) -> const Int& {  // bound for level (>= 2)
    std::size_t idx = level - 2;
    return idx < omega.size() ? omega[idx] : omega.back();
  };

  Verdict v;
  v.depth = n_max;
  v.theta_div = opts.theta_div;
  v.fail_count = opts.fail_count;
  // no certified-tail branch shields a true eigenvalue here (the weighted series has no
  // registered family bound), so only persistent LATE terms count as negative evidence
  v.burn_in = std::max(opts.burn_in, n_max / 2);

  std::vector<Interval> height_dist(n_max + 1, Interval(Rat(0)));  // ||| alpha h_n |||, max entry
  for (std::size_t n = 1; n <= n_max; ++n) {
    Interval hd(Rat(0));
    for (const auto& h : d.heights(n))
      hd = interval_max(hd, nearest_int_dist(angle_times(alpha, h, opts.precision)));
    height_dist[n] = hd;
    Interval term = Rat(omega_at(n + 1)) * hd;
    v.series.push_back({n, term, true});
  }

  // certified tails first. With omega identically zero no order can change at all; with a
  // rational divisibility level every ||| alpha h_n ||| past it is exactly zero, which kills
  // the weighted terms for any omega. Beyond the supplied omega entries the sizes are
  // unknown, so no other tail can be certified.
  bool omega_zero = std::all_of(omega.begin(), omega.end(), [](const Int& w) { return w == 0; });
  if (omega_zero) {
    v.outcome = Outcome::PassUpToDepth;
    v.tail_bound = Rat(0);
    return v;
  }
  if (alpha.is_rational()) {
    if (auto level = rational_shortcut(d, alpha.rational_value()); level && *level <= n_max) {
      v.outcome = Outcome::PassUpToDepth;
      v.tail_bound = Rat(0);
      return v;
    }
  }

  for (const auto& t : v.series)
    if (t.level > v.burn_in && t.value.certainly_ge(opts.theta_div))
      v.witnesses.push_back(t.level);
  if (static_cast<int>(v.witnesses.size()) >= opts.fail_count) {
    v.outcome = Outcome::FailAtDepth;
    return v;
  }
  v.witnesses.clear();

  v.outcome = Outcome::Inconclusive;
  v.note = "no certified tail bound for the weighted series";
  return v;
}

// --- spoiling construction -----------------------------------------------------

namespace {

Interval eta_at(const BratteliDiagram& d, const AngleSpec& target, std::size_t level,
                std::uint32_t w, const Rat& prec) {
  return nearest_int_dist(angle_times(target, d.heights(level)[w], prec));
}

// eventual constant value of the composed max-source map into level b
std::optional<std::uint32_t> stable_max_source(const BratteliDiagram& d, std::size_t b,
                                               std::size_t probe_to) {
  for (std::size_t k = b + 1; k <= probe_to && k <= d.depth(); ++k) {
    auto v = composed_max_source(d, b, k);
    if (v) return v;
  }
  return std::nullopt;
}

}  // namespace

SpoilResult spoil_continuous(const BratteliDiagram& d0, const std::vector<AngleSpec>& targets,
                             const SpoilOptions& opts) {
  if (targets.empty()) throw std::invalid_argument("spoil_continuous: no targets");
  for (const auto& t : targets)
    if (t.is_rational())
      throw std::invalid_argument("spoil_continuous: targets must be irrational angles");

  BratteliDiagram d = d0;
  auto ensure_depth = [&](std::size_t L) {
    if (d.depth() < L) {
      if (!d.can_deepen())
        throw std::runtime_error("spoil_continuous: stored depth " + std::to_string(d.depth()) +
                                 " insufficient; the schedule needs depth " + std::to_string(L) +
                                 " (install a generator or deepen the diagram)");
      d = d.deepened(L);
    }
  };

  const Rat quarter = make_rat(1, 4);

  // l1: first level where every target's eta is certified < 1/4 at every vertex
  std::size_t l1 = 0;
  for (std::size_t l = 1; l <= opts.depth_cap && l1 == 0; ++l) {
    ensure_depth(l + 1);
    bool ok = true;
    for (const auto& t : targets)
      for (std::uint32_t w = 0; w < d.vertex_count(l) && ok; ++w)
        if (!eta_at(d, t, l, w, opts.precision).certainly_lt(quarter)) ok = false;
    if (ok) l1 = l;
  }
  if (l1 == 0)
    throw std::runtime_error("spoil_continuous: no level with ||| alpha h ||| < 1/4 within cap");

  std::vector<std::size_t> cuts{0, l1};
  struct LevelPlan {
    std::size_t a, b, c;
    std::uint32_t db;       // stable max-source vertex at level b
    std::uint32_t w_top;    // largest source with P_{a,b}(w, db) > 0
  };
  std::vector<LevelPlan> plans;
  Interval mass_sum(Rat(0));

  for (std::size_t n = 2; n < 2 + opts.max_levels; ++n) {
    std::size_t a = cuts.back();

    // b: composed max-source into b stabilizes to db, and the d-block at db is deep
    // enough that t = floor(1/(2 eta)) + 1 exists for every target
    std::size_t b = 0;
    std::uint32_t db = 0, w_top = 0;
    for (std::size_t trial = a + 2; trial <= opts.depth_cap; ++trial) {
      ensure_depth(trial + 6);
      auto stable = stable_max_source(d, trial, trial + 6);
      if (!stable) continue;
      IntMatrix P = d.product_matrix(a, trial);
      std::uint32_t wt = 0;
      for (std::uint32_t w = 0; w < P.rows(); ++w)
        if (P(w, *stable) > 0) wt = w;
      bool ok = true;
      for (const auto& t : targets) {
        Interval eta = eta_at(d, t, a, wt, opts.precision);
        if (!(eta.lo > 0)) { ok = false; break; }
        if (!(Rat(P(wt, *stable) - 1) > 1 / eta.lo)) { ok = false; break; }
      }
      if (ok) {
        b = trial;
        db = *stable;
        w_top = wt;
        break;
      }
    }
    if (b == 0) {
      if (plans.empty())
        throw std::runtime_error("spoil_continuous: schedule found no usable level pair "
                                 "within the depth cap");
      break;  // keep the levels built so far
    }

    // c: tower growth h_c >= n, D_n mass <= eps^n, composed max-source over [b,c] constant
    Rat eps_n = opts.epsilon_base;
    for (std::size_t k = 1; k < n; ++k) eps_n = eps_n * opts.epsilon_base;
    std::size_t c = 0;
    Interval mass_n(Rat(0));
    for (std::size_t trial = b + 2; trial <= opts.depth_cap; ++trial) {
      ensure_depth(trial + 10);
      auto cm = composed_max_source(d, b, trial);
      if (!cm || *cm != db) continue;
      bool grown = true;
      for (const auto& h : d.heights(trial))
        if (h < Int(static_cast<unsigned long>(n))) grown = false;
      if (!grown) continue;
      auto measures = invariant_measures(d, std::min(trial + 10, d.depth()), make_rat(1, 1000));
      Interval mass(Rat(0));
      for (const auto& mu : measures) {
        Interval m(Rat(0));
        for (const auto& e : mu.at_level(trial)) m = m + e;
        mass = interval_max(mass, m);
      }
      mass = mass * Interval(Rat(d.heights(b)[db]));
      if (!mass.certainly_le(eps_n)) continue;
      // materialization guard for the telescoped level E_{a, c}
      IntMatrix P = d.product_matrix(a, trial);
      Int total(0);
      for (std::size_t i = 0; i < P.rows(); ++i)
        for (std::size_t j = 0; j < P.cols(); ++j) total += P(i, j);
      if (total > Int(static_cast<unsigned long>(opts.list_cap))) {
        c = 0;
        break;  // deeper only grows; stop the schedule here
      }
      c = trial;
      mass_n = mass;
      break;
    }
    if (c == 0) break;

    plans.push_back({a, b, c, db, w_top});
    mass_sum = mass_sum + mass_n;
    cuts.push_back(c);
  }

  if (plans.empty())
    throw std::runtime_error("spoil_continuous: could not construct any modified level");

  // telescope, then re-sort each through-e_v block by source vertex (stable)
  BratteliDiagram out = telescope(d, cuts);
  std::vector<Int> hat = out.hat();
  std::vector<OrderedLevel> levels;
  for (std::size_t k = 2; k <= out.depth(); ++k) levels.push_back(out.level(k));

  for (std::size_t k = 0; k < plans.size(); ++k) {
    const auto& plan = plans[k];
    auto& lv = levels[k];  // telescoped level k+2 carries E_{a,c}
    std::vector<std::uint8_t> block = induced_order_list(d, plan.a, plan.b, plan.db);
    for (std::uint32_t v = 0; v < lv.target_count; ++v) {
      auto& list = lv.orders[v];
      if (list.size() < block.size())
        throw std::logic_error("spoil_continuous: block longer than the order list");
      // the maximal-edge bundle e_v sits on top of the induced order
      std::size_t off = list.size() - block.size();
      for (std::size_t i = 0; i < block.size(); ++i)
        if (list[off + i] != block[i])
          throw std::logic_error("spoil_continuous: top block mismatch at vertex " +
                                 std::to_string(v));
      std::stable_sort(list.begin() + static_cast<std::ptrdiff_t>(off), list.end());
    }
  }

  BratteliDiagram modified(std::move(hat), std::move(levels));

  // witnesses: at constructed level k+2, suffix (0,...,t,...,0) with t at coordinate w_top
  std::vector<SpoilWitness> witnesses;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const auto& plan = plans[k];
    for (const auto& t : targets) {
      Interval eta = eta_at(d, t, plan.a, plan.w_top, opts.precision);
      Int tt = rat_floor(1 / (2 * eta.lo)) + 1;
      Int block_count = d.product_matrix(plan.a, plan.b)(plan.w_top, plan.db);
      SpoilWitness w;
      w.level = k + 2;
      w.target = t.to_string();
      w.source = plan.w_top;
      w.vertex = 0;
      bool found = false;
      for (Int cand = tt; cand <= tt + 2 && cand < block_count; ++cand) {
        Interval term =
            nearest_int_dist(angle_times(t, cand * d.heights(plan.a)[plan.w_top], opts.precision));
        if (term.certainly_gt(quarter) && term.certainly_lt(make_rat(3, 4))) {
          w.t = cand;
          w.term = term;
          found = true;
          break;
        }
      }
      if (!found)
        throw std::logic_error("spoil_continuous: witness term not certified in (1/4, 3/4)");
      witnesses.push_back(std::move(w));
    }
  }

  PropernessReport rep = check_properness(modified);
  return {std::move(modified), std::move(cuts), std::move(witnesses), mass_sum, std::move(rep)};
}

}  // namespace bv
