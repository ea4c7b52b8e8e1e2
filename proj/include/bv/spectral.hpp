#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bv/angle.hpp"
#include "bv/diagram.hpp"
#include "bv/dynamics.hpp"
#include "bv/measure.hpp"

namespace bv {

// Eigenvalue candidate: alpha = nu_m . mu_m at the seed level, with the integer vector
// propagated by nu_{n+1} = nu_n M_{n+1} and eta_n = alpha h_n - nu_n tracked per level.
struct Candidate {
  Interval alpha;                       // enclosure of alpha mod 1
  std::optional<AngleSpec> spec;        // exact reconstruction when the family allows it
  std::size_t seed_level = 0;
  std::vector<Int> nu_seed;
  std::vector<Int> nu_depth;
  std::vector<Interval> eta_trace;      // ||alpha h_n - nu_n||_inf, n = seed..depth
  bool certified = true;                // false when mu was too wide to decide the filter
};

enum class Outcome { PassUpToDepth, FailAtDepth, Inconclusive };

std::string outcome_name(Outcome o);

struct SeriesTerm {
  std::size_t level = 0;
  Interval value;
  bool exact = true;  // false when the level exceeded the exact-scan cap (hi is the trivial 1/2)
};

// Finite-depth verdict. Pass never claims convergence unless tail_bound certifies the
// unaudited remainder (identically-zero tail for rationals, registered family bounds).
struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::size_t depth = 0;
  std::vector<SeriesTerm> series;
  std::optional<Rat> tail_bound;
  std::vector<std::size_t> witnesses;  // levels with certified-large terms (Fail)
  std::string note;
  Rat theta_div;
  int fail_count = 0;
  std::size_t burn_in = 0;
  std::string grid;  // grid policy (measurable tests)
};

struct SpectralOptions {
  Rat theta_div = make_rat(1, 10);     // divergence threshold on |||.||| terms
  int fail_count = 3;                  // K certified-large terms force Fail
  std::size_t burn_in = 0;             // levels exempt from the Fail count
  Rat pass_tol = make_rat(1, 100);     // row tolerance for the measurable Pass rule
  Rat theta_fail = make_rat(1, 5);     // row threshold for the measurable Fail rule
  Rat precision = pow10_rat(-30);      // working enclosure precision
  Rat transfer_budget = pow10_rat(-12);  // width budget for transfer-matrix entries
  std::size_t max_exact_level = 2000000;  // positions; larger levels get lower-bound terms
  std::size_t enumeration_cap = 200000;   // explicit suffix-set enumerations
};

// --- candidates (Eqs. alpha h_n = eta_n + nu_n, nu_{n+1} = nu_n M_{n+1}, alpha = nu.mu) ---

struct CandidateOptions {
  std::size_t seed_bound = 8;     // ||nu||_inf at the seed level
  std::size_t window_lo = 2;      // seed levels [window_lo, depth]
  Rat keep_threshold = make_rat(1, 4);  // ||eta_depth|| must certify below this
};

std::vector<Candidate> enumerate_candidates(const BratteliDiagram& d, const MeasureEnclosure& mu,
                                            std::size_t depth, const CandidateOptions& opts);

// --- continuous eigenvalue test (series of t_n = max_x ||| <s_n(x), alpha h_n> |||) ---

Verdict test_continuous(const BratteliDiagram& d, const AngleSpec& alpha, std::size_t depth,
                        const SpectralOptions& opts = {});

// level at which q divides every height entry (then t_m = 0 for all m >= level)
std::optional<std::size_t> rational_shortcut(const BratteliDiagram& d, const Rat& alpha);

// --- measurable eigenvalue test (finite rank; Delta_{m,n} rows over a grid) ---

struct MeasurableReport {
  Verdict verdict;                 // condition-(2) verdict (Delta-based)
  Verdict condition1;              // condition-(1) verdict (sums to 1)
  std::vector<std::vector<Interval>> delta_rows;  // per m: per n the row sup of Delta
};

MeasurableReport test_measurable(const BratteliDiagram& d, const MeasureEnclosure& mu,
                                 const CleanReport& clean, const AngleSpec& alpha,
                                 std::size_t grid_depth, const SpectralOptions& opts = {});

// Delta_{m,n}(u,v) = (h_m(u)/h_n(v)) [P_{m,n}(u,v) - |F_{m,n}(u,v)|]
Matrix<Interval> delta_matrix(const BratteliDiagram& d, std::size_t m, std::size_t n,
                              const AngleSpec& alpha, const Rat& budget);

// --- Geometric Lemma ---

struct ClusterResult {
  std::size_t index = 0;        // chosen ell (0-based; smallest among minimizers)
  std::size_t outlier_count = 0;
  Interval bound;               // 2 N eps / (1 - cos 2 pi gamma)
  Interval hypothesis_margin;   // |S| - (1-eps) N, certified > 0
};

// Requires N > 1, 0 < eps <= 1, 0 < gamma <= 1/2 and |sum exp(2 pi i a_k)| > (1-eps) N;
// refuses (throws) when the hypothesis cannot be certified.
ClusterResult geometric_cluster(const std::vector<Rat>& angles, const Rat& eps, const Rat& gamma,
                                const Rat& precision = pow10_rat(-30));

// --- rho estimation (Lambda selection + quasi-additivity audit) ---

struct RhoEstimate {
  std::size_t depth = 0;
  std::uint32_t v0 = 0;
  // phase[m-1][u] = alpha * Lambda_{m,n*}(u,v0) mod 1 at the deepest audited n*
  std::vector<std::vector<std::optional<Interval>>> phase;
  std::vector<std::vector<std::optional<Int>>> lambda;
  struct Residual {
    std::size_t l, m, n;
    std::uint32_t u, v, w;
    Interval value;      // ||| a L_{l,m}(u,v) + a L_{m,n}(v,w) - a L_{l,n}(u,w) |||
    Interval gamma_sum;  // gamma_{l,m} + gamma_{m,n} + gamma_{l,n}
    // cluster outlier counts of the three pairs; when all are zero the quasi-additivity
    // bound value <= gamma_sum is forced, otherwise it is only asymptotic
    std::size_t out_lm = 0, out_mn = 0, out_ln = 0;
  };
  std::vector<Residual> residuals;
};

RhoEstimate estimate_rho(const BratteliDiagram& d, const MeasureEnclosure& mu,
                         const CleanReport& clean, const AngleSpec& alpha, std::size_t depth,
                         std::uint32_t v0, const SpectralOptions& opts = {});

// --- exact finite rank series test (sum over levels of the worst vertex-pair term) ---

// rho_phase: per level n (1..depth), per vertex, the phase alpha*rho_n(u) mod 1;
// pass an empty vector for rho = 0.
Verdict test_exact_rank_series(const BratteliDiagram& d, const MeasureEnclosure& mu,
                               const CleanReport& clean, const AngleSpec& alpha,
                               const std::vector<std::vector<Interval>>& rho_phase,
                               std::size_t depth, const SpectralOptions& opts = {});

}  // namespace bv
