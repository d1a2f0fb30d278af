#include "sle/approx.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sle/parallel.hpp"
#include "sle/sampling.hpp"

namespace sle {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void require_params(int k, double eta, const char* where) {
  if (k < 1) throw std::invalid_argument(std::string(where) + ": k >= 1 required");
  if (!(eta > 0.0)) throw std::invalid_argument(std::string(where) + ": eta > 0 required");
}

}  // namespace

Mat logit_gradient(const PopulationGame& game, const Vec& x, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("logit_gradient: eta > 0 required");
  const Vec p = logit_choice(game.payoff(x), eta);
  const Mat fp = game.payoff_gradient(x);
  const Eigen::RowVectorXd fbar = p.transpose() * fp;
  Mat grad(fp.rows(), fp.cols());
  for (int i = 0; i < fp.rows(); ++i) {
    grad.row(i) = (p(i) / eta) * (fp.row(i) - fbar);
  }
  return grad;
}

Mat logit_hessian(const PopulationGame& game, const Vec& x, double eta,
                  int action) {
  if (!(eta > 0.0)) throw std::invalid_argument("logit_hessian: eta > 0 required");
  const int n = game.actions();
  if (action < 0 || action >= n) {
    throw std::invalid_argument("logit_hessian: action out of range");
  }
  const Vec p = logit_choice(game.payoff(x), eta);
  const Mat fp = game.payoff_gradient(x);
  const Eigen::RowVectorXd fbar = p.transpose() * fp;

  Mat rr_bar = Mat::Zero(n, n);
  std::vector<Vec> r(n);
  for (int l = 0; l < n; ++l) {
    r[l] = (fp.row(l) - fbar).transpose();
    rr_bar += p(l) * (r[l] * r[l].transpose());
  }
  Mat fpp_bar = Mat::Zero(n, n);
  for (int l = 0; l < n; ++l) fpp_bar += p(l) * game.payoff_hessian(l, x);

  const Mat rank_term = r[action] * r[action].transpose() - rr_bar;
  const Mat curv_term = game.payoff_hessian(action, x) - fpp_bar;
  return (p(action) / (eta * eta)) * rank_term + (p(action) / eta) * curv_term;
}

PremiumReport premiums(const PopulationGame& game, const Vec& x, int k,
                       double eta) {
  require_params(k, eta, "premiums");
  const int n = game.actions();
  const Vec p = logit_choice(game.payoff(x), eta);
  const Mat fp = game.payoff_gradient(x);
  const Eigen::RowVectorXd fbar = p.transpose() * fp;
  const Mat sigma = covariance(x);

  PremiumReport rep;
  rep.v.resize(n);
  rep.q.resize(n);
  const double v_scale = 1.0 / (2.0 * k * eta * eta);
  const double q_scale = 1.0 / (2.0 * k * eta);
  for (int i = 0; i < n; ++i) {
    const Vec r = (fp.row(i) - fbar).transpose();
    rep.v(i) = v_scale * r.dot(sigma * r);
    rep.q(i) = q_scale * game.payoff_hessian(i, x).cwiseProduct(sigma).sum();
  }
  rep.v_hat = logit_center(rep.v, p).centered;
  rep.q_hat = logit_center(rep.q, p).centered;
  rep.multiplier = Vec::Ones(n) + rep.v_hat + rep.q_hat;
  rep.valid = rep.multiplier.minCoeff() > 0.0;
  rep.distortion.resize(n);
  for (int i = 0; i < n; ++i) rep.distortion(i) = eta * std::log(rep.multiplier(i));
  return rep;
}

Vec corrected_rule(const PopulationGame& game, const Vec& x, int k, double eta) {
  const PremiumReport rep = premiums(game, x, k, eta);
  if (!rep.valid) {
    throw std::domain_error(
        "corrected_rule: multiplier 1 + v_hat + q_hat is not positive at the "
        "queried state; the approximation regime is invalid there");
  }
  const Vec p = logit_choice(game.payoff(x), eta);
  return rep.multiplier.cwiseProduct(p);
}

std::unique_ptr<PopulationGame> virtual_game(const PopulationGame& game, int k,
                                             double eta) {
  require_params(k, eta, "virtual_game");
  const PopulationGame* base = &game;
  auto payoff = [base, k, eta](const Vec& x) -> Vec {
    const PremiumReport rep = premiums(*base, x, k, eta);
    if (!rep.valid) {
      throw std::domain_error(
          "virtual_game: multiplier 1 + v_hat + q_hat is not positive at the "
          "queried state");
    }
    return base->payoff(x) + rep.distortion;
  };
  return std::make_unique<CallbackGame>(
      game.actions(), payoff,
      "virtual(" + game.name() + ",k=" + std::to_string(k) + ",eta=" + fmt(eta) + ")");
}

PremiumReport separable_premiums(const SeparableGame& game, const Vec& x, int k,
                                 double eta) {
  require_params(k, eta, "separable_premiums");
  if (game.actions() != 2) {
    throw std::invalid_argument("separable_premiums: two-action game required");
  }
  const Vec p = logit_choice(game.payoff(x), eta);
  const double x1 = x(0), x2 = x(1);
  const double f1p = game.component(0).deriv(x1);
  const double f2p = game.component(1).deriv(x2);
  const double f1pp = game.component(0).deriv2(x1);
  const double f2pp = game.component(1).deriv2(x2);
  const double sigma = (f1p + f2p) * (f1p + f2p) * x1 * x2;
  const double v_scale = 1.0 / (2.0 * k * eta * eta);
  const double q_scale = 1.0 / (2.0 * k * eta);

  PremiumReport rep;
  rep.v.resize(2);
  rep.q.resize(2);
  rep.v_hat.resize(2);
  rep.q_hat.resize(2);
  rep.v(0) = v_scale * p(1) * p(1) * sigma;
  rep.v(1) = v_scale * p(0) * p(0) * sigma;
  rep.q(0) = q_scale * f1pp * x1 * (1.0 - x1);
  rep.q(1) = q_scale * f2pp * x2 * (1.0 - x2);
  rep.v_hat(0) = v_scale * p(1) * (1.0 - 2.0 * p(0)) * sigma;
  rep.v_hat(1) = v_scale * p(0) * (1.0 - 2.0 * p(1)) * sigma;
  rep.q_hat(0) = q_scale * p(1) * (f1pp - f2pp) * x1 * x2;
  rep.q_hat(1) = q_scale * p(0) * (f2pp - f1pp) * x1 * x2;
  rep.multiplier = Vec::Ones(2) + rep.v_hat + rep.q_hat;
  rep.valid = rep.multiplier.minCoeff() > 0.0;
  rep.distortion.resize(2);
  for (int i = 0; i < 2; ++i) rep.distortion(i) = eta * std::log(rep.multiplier(i));
  return rep;
}

InteriorShiftPrediction interior_shift_two_action(const Mat& m, int k, double eta,
                                                  double margin) {
  require_params(k, eta, "interior_shift_two_action");
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument("interior_shift_two_action: 2x2 matrix required");
  }
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double beta = (a - c) - (b - d);
  if (beta == 0.0) {
    throw std::invalid_argument("interior_shift_two_action: beta = 0 (degenerate game)");
  }
  const double xs = (d - b) / beta;
  if (!(xs > 0.0 && xs < 1.0)) {
    throw std::invalid_argument(
        "interior_shift_two_action: interior Nash x* in (0,1) required");
  }
  if (std::abs(xs - 0.5) < margin) {
    throw std::domain_error(
        "interior_shift_two_action: x* within " + fmt(margin) +
        " of 1/2; the first-order branch selection is ambiguous for "
        "near-symmetric games");
  }
  const double theta = 1.0 / (2.0 * k * eta * eta);
  const double v_star = theta * beta * beta * xs * (1.0 - xs);
  const double logit_term = (eta / beta) * std::log((1.0 - xs) / xs);
  const double sampling_term = (eta / beta) * std::log1p(v_star);
  InteriorShiftPrediction out;
  out.nash_x1 = xs;
  out.beta = beta;
  out.variance_term = v_star;
  out.predicted_x1 = xs - logit_term + (xs < 0.5 ? -sampling_term : sampling_term);
  out.predicts_decrease = out.predicted_x1 < xs;
  return out;
}

int default_audit_resolution(int n) { return n == 2 ? 60 : 25; }

ErrorScalingReport error_scaling_audit(const PopulationGame& game, double eta,
                                       const std::vector<int>& k_ladder,
                                       double epsilon, int grid_resolution) {
  if (k_ladder.size() < 3) {
    throw std::invalid_argument("error_scaling_audit: ladder needs >= 3 points");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("error_scaling_audit: epsilon > 0 required");
  }
  const int n = game.actions();
  std::vector<Vec> grid;
  for (auto& x : barycentric_lattice(n, grid_resolution)) {
    if (x.minCoeff() >= epsilon) grid.push_back(std::move(x));
  }
  if (grid.empty()) {
    throw std::invalid_argument("error_scaling_audit: empty eps-interior grid");
  }

  ErrorScalingReport rep;
  rep.eta = eta;
  rep.epsilon = epsilon;
  rep.regime = eta <= 1.0 ? "eta<=1" : "eta>=1";
  for (int k : k_ladder) {
    SamplingLogitRule rule(game, k, eta);
    std::vector<double> errs(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      const Vec l = rule(grid[i]);
      const Vec t = corrected_rule(game, grid[i], k, eta);
      errs[i] = (l - t).cwiseAbs().maxCoeff();
    });
    double sup = 0.0;
    for (double e : errs) sup = std::max(sup, e);
    rep.k.push_back(k);
    rep.sup_error.push_back(sup);
  }

  // least squares on log(err) vs log(k), top half of the ladder only, to
  // dodge pre-asymptotic bias
  const std::size_t mfit = rep.k.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = mfit; i < rep.k.size(); ++i) {
    const double lx = std::log(static_cast<double>(rep.k[i]));
    const double ly = std::log(std::max(rep.sup_error[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return rep;
}

}  // namespace sle
