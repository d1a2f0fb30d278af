#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sle/choice.hpp"
#include "sle/game.hpp"

namespace sle {

// A map X -> X whose fixed points we solve for.
using SimplexMap = std::function<Vec(const Vec&)>;

struct SolverOptions {
  double damping = 0.5;     // x <- (1-a) x + a F(x)
  double tol = 1e-12;       // residual ||F(x) - x||_inf
  int max_iter = 20000;
  bool newton_polish = true;
  bool newton_first = false;  // skip the damped phase (continuation corrector)
};

struct EquilibriumResult {
  Vec state;
  double residual = 0.0;
  bool converged = false;
  std::string rule;    // "SLE(k=2,eta=0.3)", "logit(eta=0.3)", ...
  std::string solver;  // iteration | iteration+newton | eigenvector | quadratic
};

// Damped fixed-point iteration with stall detection, followed by a
// safeguarded Newton polish on reduced simplex coordinates. The damped
// phase alone is not enough in the small-eta regimes: the iteration's
// contraction factor approaches 1 (for k=1 it equals the subdominant
// eigenvalue of Pi, which can be 1 - 1e-22 at eta = 0.02), so Newton does
// the last stretch. Damping switches to 1 once a finite-difference
// spectral-radius estimate certifies local contraction (< 0.9). After
// convergence the state is passed once more through the map, which is an
// all-positive mixture for logit-family rules: this restores strictly
// positive entries that the Newton update may have rounded to zero.
EquilibriumResult solve_fixed_point(const SimplexMap& rule, const Vec& x0,
                                    const SolverOptions& opts = {});

EquilibriumResult solve_sle_fixed_point(const PopulationGame& game, int k,
                                        double eta, const Vec& x0,
                                        const SolverOptions& opts = {});

// k = 1: the rule is linear, L(x) = Pi x with Pi_ij = P_i^eta(e_j), and the
// unique SLE is the Perron eigenvector of the positive column-stochastic
// matrix Pi. Computed by the power method accelerated through repeated
// squaring (Pi^(2^t) converges to the rank-one limit x* 1^T even when the
// spectral gap underflows), verified to residual 1e-14 against Pi itself.
EquilibriumResult solve_sle_k1(const PopulationGame& game, double eta);

// n = 2, k = 2: L_1(y) - y is the quadratic
//   (q2 - 2 q1 + q0) y^2 + (2 (q1 - q0) - 1) y + q0
// with q0 = P_1(e_2), q1 = P_1((1/2,1/2)), q2 = P_1(e_1); it has exactly one
// root in (0,1). The smaller coordinate of the result is recomputed from the
// complementary quadratic in x_2 so strict interiority survives in double
// even when the root is within 1e-40 of a vertex.
EquilibriumResult solve_sle_k2_two_action(const PopulationGame& game, double eta);

// Deterministic multistart seed set: barycenter, vertices pulled to the
// interior (0.9 e_i + 0.1 uniform), then an interior lattice refined until
// at least min_count seeds exist.
std::vector<Vec> multistart_seeds(int n, int min_count);

std::vector<EquilibriumResult> multistart(const SimplexMap& rule, int n,
                                          int min_seeds = 20,
                                          const SolverOptions& opts = {});

// Greedy clustering of states by the inf-norm, representatives sorted
// lexicographically so aggregation is order-independent.
struct ClusterReport {
  std::vector<Vec> representatives;
  std::vector<int> sizes;
};
ClusterReport cluster_states(const std::vector<Vec>& states, double radius);
double max_pairwise_distance(const std::vector<Vec>& states);

struct EquilibriumCurve {
  std::vector<double> eta;  // decreasing
  std::vector<Vec> states;
  std::vector<double> residuals;
  int branch = 0;
  bool truncated = false;  // corrector failed mid-grid (fold point)
  std::string solver = "continuation";
};

struct ContinuationOptions {
  SolverOptions solver;
  double step_bound = 0.1;   // locality bound between consecutive states
  double min_deta = 1e-4;    // floor for internal step halving
  double dedup_tol = 1e-8;
  int scan_resolution = 4000;  // dense root scan for two-action games
  ContinuationOptions() { solver.tol = 1e-12; }
};

using RuleFactory = std::function<SimplexMap(double eta)>;

// Predictor-corrector branch tracing over a decreasing eta grid. Each seed
// starts a descending branch at the largest eta; an ascending pass seeded at
// the smallest eta (for n=2, at every root found by a dense sign scan)
// catches branches that exist only below a fold. Branches that merge are
// deduplicated pointwise.
std::vector<EquilibriumCurve> trace_equilibrium_curves(
    const RuleFactory& factory, int n, const std::vector<double>& eta_grid,
    const std::vector<Vec>& seeds, const ContinuationOptions& opts = {});

std::vector<EquilibriumCurve> solve_logit_continuation(
    const PopulationGame& game, const std::vector<double>& eta_grid,
    const std::vector<Vec>& seeds, const ContinuationOptions& opts = {});

// Closed-form Nash equilibria of a 2x2 linear game, as x_1 values.
struct TwoActionNash {
  bool degenerate = false;  // beta = (a-c)-(b-d) = 0
  std::optional<double> interior;
  std::vector<double> pure;
  std::vector<double> all() const;
};
TwoActionNash nash_two_action_linear(const Mat& a);

}  // namespace sle
