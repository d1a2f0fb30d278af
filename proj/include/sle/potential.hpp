#pragma once

#include <functional>
#include <vector>

#include "sle/approx.hpp"
#include "sle/game.hpp"

namespace sle {

// Scalar potentials of a two-action game along the path y(t) = (t, 1-t):
//   f  = integral of F_1 - F_2     (anchored at f(0) = 0)
//   g  = integral of G_1 - G_2     (the sampling perturbation)
//   h  = -eta sum_i x_i log x_i    (entropy, 0 log 0 = 0)
//   f_eta = f + h,  f_k_eta = f + g + h.
// Values are computed by composite Simpson quadrature on the profile grid.
struct PotentialProfile {
  int k = 0;
  double eta = 0.0;
  Vec x1, f, h, g, f_eta, f_k_eta;
  std::vector<double> stationary_f, stationary_h, stationary_g;
  std::vector<double> stationary_f_eta, stationary_f_k_eta;
  // directional derivatives along (1,-1), usable on (0,1)
  std::function<double(double)> df, dg, dh;
};

// grid_size >= 100 nodes on [0,1]. Throws std::domain_error with the
// offending t if the premium multiplier turns nonpositive on the path.
PotentialProfile potential_profile(const PopulationGame& game, int k, double eta,
                                   int grid_size);

// Interior stationary points of f_k_eta (the entropy barrier keeps them off
// the boundary); these are the fixed points of the corrected rule.
std::vector<double> stationary_points(const PotentialProfile& profile);

// f_k_eta(to) - f_k_eta(from) by local quadrature of the derivative; avoids
// the cancellation of differencing two long-range integrals.
double potential_increment(const PotentialProfile& profile, double x1_from,
                           double x1_to);

enum class GShape { QuasiconcaveMaxAtNash, Zero, QuasiconvexMinAtNash, Inconclusive };

struct GShapeReport {
  GShape shape = GShape::Inconclusive;
  double nash_x1 = 0.0;
  double extremum_x1 = 0.0;
  double boundary_slope_0 = 0.0;
  double boundary_slope_1 = 0.0;
  std::vector<double> witnesses;  // grid points violating the sign pattern
};

// Certifies the sign pattern of G_1 - G_2 around the interior Nash point
// and locates the extremum of g (within one grid cell). Requires an
// interior Nash equilibrium or beta = 0.
GShapeReport classify_g_shape(const LinearGame& game, int k, double eta,
                              int grid_size);

}  // namespace sle
