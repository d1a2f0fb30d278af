#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sle/simplex.hpp"

namespace sle {

// A single-population game: a payoff oracle F with first and second
// derivatives. Derivatives are defined by the algebraic formulas on all of
// R^n (no tangent-space projection), so callers may probe slightly off the
// simplex, e.g. for finite differences.
class PopulationGame {
 public:
  virtual ~PopulationGame() = default;

  virtual int actions() const = 0;
  virtual Vec payoff(const Vec& x) const = 0;
  // Row i is the gradient of F_i at x.
  virtual Mat payoff_gradient(const Vec& x) const = 0;
  // Hessian of F_action at x; symmetric.
  virtual Mat payoff_hessian(int action, const Vec& x) const = 0;
  virtual std::string name() const = 0;
};

// Random matching in a normal-form game: F(x) = A x.
class LinearGame final : public PopulationGame {
 public:
  explicit LinearGame(Mat payoff_matrix, std::string name = "linear");

  int actions() const override { return static_cast<int>(a_.rows()); }
  Vec payoff(const Vec& x) const override { return a_ * x; }
  Mat payoff_gradient(const Vec&) const override { return a_; }
  Mat payoff_hessian(int, const Vec&) const override {
    return Mat::Zero(a_.rows(), a_.cols());
  }
  std::string name() const override { return name_; }

  const Mat& matrix() const { return a_; }

 private:
  Mat a_;
  std::string name_;
};

// One coordinate function F_i(x_i) with its first two derivatives.
struct SeparableComponent {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
};

// F_i depends only on x_i; the Hessian of F_i has a single nonzero entry
// at (i, i).
class SeparableGame final : public PopulationGame {
 public:
  SeparableGame(std::vector<SeparableComponent> components,
                std::string name = "separable");

  int actions() const override { return static_cast<int>(comps_.size()); }
  Vec payoff(const Vec& x) const override;
  Mat payoff_gradient(const Vec& x) const override;
  Mat payoff_hessian(int action, const Vec& x) const override;
  std::string name() const override { return name_; }

  const SeparableComponent& component(int i) const { return comps_.at(i); }

 private:
  std::vector<SeparableComponent> comps_;
  std::string name_;
};

// Payoff oracle given by a callback; gradient and Hessian fall back to
// central finite differences of the payoff.
class CallbackGame final : public PopulationGame {
 public:
  CallbackGame(int n, std::function<Vec(const Vec&)> payoff, std::string name,
               double grad_step = 1e-6, double hess_step = 1e-4);

  int actions() const override { return n_; }
  Vec payoff(const Vec& x) const override { return payoff_(x); }
  Mat payoff_gradient(const Vec& x) const override;
  Mat payoff_hessian(int action, const Vec& x) const override;
  std::string name() const override { return name_; }

 private:
  int n_;
  std::function<Vec(const Vec&)> payoff_;
  std::string name_;
  double grad_step_, hess_step_;
};

// F_i(x_i) = sum_j coeffs[j] * x_i^j.
SeparableComponent polynomial_component(std::vector<double> coeffs);

// Catalog. A = [[s,0],[0,t]] with s > t > 0; interior Nash x_1 = t/(s+t).
LinearGame make_coordination_2x2(double s, double t);
// The 3x3 game [[6,0,0],[5,7,5],[0,5,8]] with three strict equilibria.
LinearGame make_young_game();
// Technology choice with a costly compatible option; requires 0 < g < 1 and
// 0 < c < g/(1+g).
LinearGame make_bilingual_game(double g, double c);
// F(x) = (-x_1, -2 x_2^2).
SeparableGame make_congestion_game();

}  // namespace sle
