#include "sle/game.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace sle {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

LinearGame::LinearGame(Mat payoff_matrix, std::string name)
    : a_(std::move(payoff_matrix)), name_(std::move(name)) {
  if (a_.rows() < 2 || a_.rows() != a_.cols()) {
    throw std::invalid_argument("LinearGame: payoff matrix must be square, n >= 2");
  }
}

SeparableGame::SeparableGame(std::vector<SeparableComponent> components,
                             std::string name)
    : comps_(std::move(components)), name_(std::move(name)) {
  if (comps_.size() < 2) {
    throw std::invalid_argument("SeparableGame: need n >= 2 components");
  }
  for (const auto& c : comps_) {
    if (!c.value || !c.deriv || !c.deriv2) {
      throw std::invalid_argument("SeparableGame: component callbacks missing");
    }
  }
}

Vec SeparableGame::payoff(const Vec& x) const {
  const int n = actions();
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = comps_[i].value(x(i));
  return f;
}

Mat SeparableGame::payoff_gradient(const Vec& x) const {
  const int n = actions();
  Mat g = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = comps_[i].deriv(x(i));
  return g;
}

Mat SeparableGame::payoff_hessian(int action, const Vec& x) const {
  const int n = actions();
  Mat h = Mat::Zero(n, n);
  h(action, action) = comps_[action].deriv2(x(action));
  return h;
}

CallbackGame::CallbackGame(int n, std::function<Vec(const Vec&)> payoff,
                           std::string name, double grad_step, double hess_step)
    : n_(n),
      payoff_(std::move(payoff)),
      name_(std::move(name)),
      grad_step_(grad_step),
      hess_step_(hess_step) {
  if (n_ < 2) throw std::invalid_argument("CallbackGame: need n >= 2");
}

Mat CallbackGame::payoff_gradient(const Vec& x) const {
  Mat g(n_, n_);
  Vec xp = x, xm = x;
  for (int j = 0; j < n_; ++j) {
    xp(j) = x(j) + grad_step_;
    xm(j) = x(j) - grad_step_;
    g.col(j) = (payoff_(xp) - payoff_(xm)) / (2.0 * grad_step_);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return g;
}

Mat CallbackGame::payoff_hessian(int action, const Vec& x) const {
  const double h = hess_step_;
  Mat hess(n_, n_);
  const double f0 = payoff_(x)(action);
  Vec y = x;
  for (int i = 0; i < n_; ++i) {
    y(i) = x(i) + h;
    const double fp = payoff_(y)(action);
    y(i) = x(i) - h;
    const double fm = payoff_(y)(action);
    y(i) = x(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (int j = i + 1; j < n_; ++j) {
      y(i) = x(i) + h;
      y(j) = x(j) + h;
      const double fpp = payoff_(y)(action);
      y(j) = x(j) - h;
      const double fpm = payoff_(y)(action);
      y(i) = x(i) - h;
      const double fmm = payoff_(y)(action);
      y(j) = x(j) + h;
      const double fmp = payoff_(y)(action);
      y(i) = x(i);
      y(j) = x(j);
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return hess;
}

SeparableComponent polynomial_component(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  auto horner = [](const std::vector<double>& c, double t) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  };
  std::vector<double> d1(coeffs.size() > 1 ? coeffs.size() - 1 : 1, 0.0);
  for (std::size_t j = 1; j < coeffs.size(); ++j) d1[j - 1] = coeffs[j] * j;
  std::vector<double> d2(d1.size() > 1 ? d1.size() - 1 : 1, 0.0);
  for (std::size_t j = 1; j < d1.size(); ++j) d2[j - 1] = d1[j] * j;
  SeparableComponent c;
  c.value = [coeffs, horner](double t) { return horner(coeffs, t); };
  c.deriv = [d1, horner](double t) { return horner(d1, t); };
  c.deriv2 = [d2, horner](double t) { return horner(d2, t); };
  return c;
}

LinearGame make_coordination_2x2(double s, double t) {
  if (!(s > t) || !(t > 0.0)) {
    throw std::invalid_argument("make_coordination_2x2: requires s > t > 0");
  }
  Mat a(2, 2);
  a << s, 0.0, 0.0, t;
  return LinearGame(a, "coordination(s=" + fmt(s) + ",t=" + fmt(t) + ")");
}

LinearGame make_young_game() {
  Mat a(3, 3);
  a << 6, 0, 0, 5, 7, 5, 0, 5, 8;
  return LinearGame(a, "young");
}

LinearGame make_bilingual_game(double g, double c) {
  if (!(g > 0.0 && g < 1.0) || !(c > 0.0 && c < g / (1.0 + g))) {
    throw std::invalid_argument(
        "make_bilingual_game: requires 0 < g < 1 and 0 < c < g/(1+g)");
  }
  Mat a(3, 3);
  a << 1.0 + g, 0.0, 1.0 + g,
       1.0, 1.0, 1.0,
       1.0 + g - c, 1.0 - c, 1.0 + g - c;
  return LinearGame(a, "bilingual(g=" + fmt(g) + ",c=" + fmt(c) + ")");
}

SeparableGame make_congestion_game() {
  SeparableComponent c1;
  c1.value = [](double t) { return -t; };
  c1.deriv = [](double) { return -1.0; };
  c1.deriv2 = [](double) { return 0.0; };
  SeparableComponent c2;
  c2.value = [](double t) { return -2.0 * t * t; };
  c2.deriv = [](double t) { return -4.0 * t; };
  c2.deriv2 = [](double) { return -4.0; };
  return SeparableGame({c1, c2}, "congestion");
}

}  // namespace sle
