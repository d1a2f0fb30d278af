#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sle/choice.hpp"
#include "sle/game.hpp"

namespace sle {

// Analytic gradient of the logit choice rule: row i is
//   P_i'(x) = (1/eta) P_i(x) (F_i'(x) - sum_l P_l F_l'(x)).
Mat logit_gradient(const PopulationGame& game, const Vec& x, double eta);

// Analytic Hessian of P_action:
//   P_i'' = (1/eta^2) P_i (R_i R_i^T - sum_l P_l R_l R_l^T)
//         + (1/eta)   P_i (F_i''    - sum_l P_l F_l''),
// with R_i the logit-centered payoff gradient of action i. Symmetric.
Mat logit_hessian(const PopulationGame& game, const Vec& x, double eta, int action);

// Sampling premiums of the second-order correction.
//   v_i = 1/(2 k eta^2) R_i^T Sigma(x) R_i      (variance premium, >= 0)
//   q_i = 1/(2 k eta)   <F_i''(x), Sigma(x)>    (curvature premium)
// v_hat/q_hat are the logit-centered values; multiplier_i = 1 + v_hat_i +
// q_hat_i must stay positive for the multiplicative form to make sense, and
// distortion_i = eta * log(multiplier_i) is the virtual payoff shift.
struct PremiumReport {
  Vec v, q, v_hat, q_hat, multiplier, distortion;
  bool valid = false;  // all multipliers > 0
};
PremiumReport premiums(const PopulationGame& game, const Vec& x, int k, double eta);

// The corrected choice rule TL_i = multiplier_i * P_i. Sums to one by the
// centering identity. Throws std::domain_error if any multiplier is
// nonpositive: that regime is outside the approximation's validity and we
// refuse rather than clamp.
Vec corrected_rule(const PopulationGame& game, const Vec& x, int k, double eta);

// The virtual game F + G whose plain logit choice reproduces the corrected
// rule. Payoffs are analytic; gradient/Hessian fall back to central finite
// differences. The returned game borrows `game` and must not outlive it.
std::unique_ptr<PopulationGame> virtual_game(const PopulationGame& game, int k,
                                             double eta);

// Closed forms for separable two-action games:
//   v_hat_1 = 1/(2 k eta^2) P_2 (1 - 2 P_1) sigma,  sigma = (F_1'+F_2')^2 x_1 x_2
//   q_hat_1 = 1/(2 k eta)   P_2 (F_1'' - F_2'') x_1 x_2
PremiumReport separable_premiums(const SeparableGame& game, const Vec& x, int k,
                                 double eta);

// First-order location of the interior fixed point of the corrected rule in
// a 2x2 linear game with interior Nash x*:
//   xt = x* - (eta/beta) log((1-x*)/x*) -/+ (eta/beta) log(1 + v*),
// v* = sigma_A(x*)/(2 k eta^2), minus branch for x* < 1/2 and plus for
// x* > 1/2 (action-relabel symmetry). Requires |x* - 1/2| >= margin; near-
// symmetric games are refused.
struct InteriorShiftPrediction {
  double nash_x1 = 0.0;
  double predicted_x1 = 0.0;
  double beta = 0.0;
  double variance_term = 0.0;  // v* at the Nash point
  bool predicts_decrease = false;  // predicted_x1 < nash_x1
};
InteriorShiftPrediction interior_shift_two_action(const Mat& a, int k, double eta,
                                                  double margin = 0.05);

// Sup-norm gap between the exactly enumerated rule L and the corrected rule
// over the eps-interior grid, per k in the ladder, with a log-log slope
// fitted on the top half of the ladder.
struct ErrorScalingReport {
  std::vector<int> k;
  std::vector<double> sup_error;
  double slope = 0.0;
  std::string regime;  // "eta<=1" | "eta>=1"
  double eta = 0.0;
  double epsilon = 0.0;
};
ErrorScalingReport error_scaling_audit(const PopulationGame& game, double eta,
                                       const std::vector<int>& k_ladder,
                                       double epsilon, int grid_resolution);

// Default eps-interior grid resolution: 60 for n=2, 25 otherwise.
int default_audit_resolution(int n);

}  // namespace sle
