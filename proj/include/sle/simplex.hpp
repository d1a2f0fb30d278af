#pragma once

#include <Eigen/Dense>

namespace sle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A population state: a point on the n-simplex, n >= 2. Construction
// validates the input. Entries in [-1e-12, 0) are treated as roundoff and
// clamped to zero; any larger negative entry is rejected. The weight sum
// must lie within 1e-9 of one, in which case the weights are renormalized
// so the stored sum is 1 to within 1e-12; larger deviations are rejected.
class PopulationState {
 public:
  static constexpr double kSumWindow = 1e-9;
  static constexpr double kNegativeWindow = -1e-12;

  explicit PopulationState(Vec weights);

  static PopulationState uniform(int n);
  static PopulationState vertex(int n, int action);
  // mix * e_action + (1 - mix) * uniform; the standard interior multistart
  // seed near a vertex.
  static PopulationState near_vertex(int n, int action, double mix = 0.9);

  const Vec& weights() const { return w_; }
  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_(i); }

 private:
  Vec w_;
};

}  // namespace sle
