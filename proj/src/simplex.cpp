#include "sle/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sle {

PopulationState::PopulationState(Vec weights) : w_(std::move(weights)) {
  const int n = static_cast<int>(w_.size());
  if (n < 2) throw std::invalid_argument("PopulationState: need n >= 2");
  for (int i = 0; i < n; ++i) {
    const double wi = w_(i);
    if (!std::isfinite(wi)) {
      throw std::invalid_argument("PopulationState: non-finite weight");
    }
    if (wi < 0.0) {
      if (wi < kNegativeWindow) {
        throw std::invalid_argument("PopulationState: negative weight " +
                                    std::to_string(wi));
      }
      w_(i) = 0.0;
    }
  }
  const double sum = w_.sum();
  if (std::abs(sum - 1.0) > kSumWindow) {
    throw std::invalid_argument("PopulationState: weights sum to " +
                                std::to_string(sum) + ", outside the 1e-9 window");
  }
  w_ /= sum;
}

PopulationState PopulationState::uniform(int n) {
  return PopulationState(Vec::Constant(n, 1.0 / n));
}

PopulationState PopulationState::vertex(int n, int action) {
  if (action < 0 || action >= n) {
    throw std::invalid_argument("PopulationState::vertex: action out of range");
  }
  Vec w = Vec::Zero(n);
  w(action) = 1.0;
  return PopulationState(std::move(w));
}

PopulationState PopulationState::near_vertex(int n, int action, double mix) {
  if (mix <= 0.0 || mix >= 1.0) {
    throw std::invalid_argument("PopulationState::near_vertex: mix in (0,1)");
  }
  Vec w = Vec::Constant(n, (1.0 - mix) / n);
  w(action) += mix;
  return PopulationState(std::move(w));
}

}  // namespace sle
