#include "sle/choice.hpp"

#include <cmath>
#include <stdexcept>

namespace sle {

BestResponseSet best_response_set(const Vec& payoffs, double tol) {
  if (tol < 0.0) throw std::invalid_argument("best_response_set: tol >= 0");
  BestResponseSet s;
  s.tol = tol;
  const double m = payoffs.maxCoeff();
  for (int i = 0; i < payoffs.size(); ++i) {
    if (payoffs(i) >= m - tol) s.actions.push_back(i);
  }
  return s;
}

BestResponseSet best_response_set(const PopulationGame& game, const Vec& x,
                                  double tol) {
  return best_response_set(game.payoff(x), tol);
}

TieRule TieRule::uniform(double tol) { return TieRule(Kind::kUniform, 0, tol); }
TieRule TieRule::lowest_index(double tol) {
  return TieRule(Kind::kLowestIndex, 0, tol);
}
TieRule TieRule::sticky(int action, double tol) {
  return TieRule(Kind::kSticky, action, tol);
}

Vec TieRule::mixed_response(const Vec& payoffs) const {
  const auto br = best_response_set(payoffs, tol_);
  Vec alpha = Vec::Zero(payoffs.size());
  switch (kind_) {
    case Kind::kLowestIndex:
      alpha(br.actions.front()) = 1.0;
      break;
    case Kind::kSticky:
      for (int a : br.actions) {
        if (a == action_) {
          alpha(action_) = 1.0;
          return alpha;
        }
      }
      [[fallthrough]];
    case Kind::kUniform: {
      const double w = 1.0 / static_cast<double>(br.actions.size());
      for (int a : br.actions) alpha(a) = w;
      break;
    }
  }
  return alpha;
}

std::string TieRule::label() const {
  switch (kind_) {
    case Kind::kUniform: return "uniform";
    case Kind::kLowestIndex: return "lowest-index";
    case Kind::kSticky: return "sticky(" + std::to_string(action_) + ")";
  }
  return "?";
}

Vec logit_choice(const Vec& payoffs, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("logit_choice: eta > 0 required");
  const double shift = payoffs.maxCoeff();
  Vec e(payoffs.size());
  for (int i = 0; i < payoffs.size(); ++i) {
    e(i) = std::exp((payoffs(i) - shift) / eta);
  }
  return e / e.sum();
}

Vec logit_choice(const PopulationGame& game, const Vec& x, double eta) {
  return logit_choice(game.payoff(x), eta);
}

LogitRule::LogitRule(const PopulationGame& game, double eta)
    : game_(&game), eta_(eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("LogitRule: eta > 0 required");
}

Vec LogitRule::operator()(const Vec& x) const {
  return logit_choice(game_->payoff(x), eta_);
}

BestResponseRule::BestResponseRule(const PopulationGame& game, TieRule ties)
    : game_(&game), ties_(ties) {}

Vec BestResponseRule::operator()(const Vec& x) const {
  return ties_.mixed_response(game_->payoff(x));
}

SamplingLogitRule::SamplingLogitRule(const PopulationGame& game, int k,
                                     double eta, int max_k)
    : table_(make_outcome_table(game.actions(), k, max_k)), eta_(eta) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("SamplingLogitRule: eta > 0 required");
  }
  choice_at_outcome_.reserve(table_.states.size());
  for (const auto& w : table_.states) {
    choice_at_outcome_.push_back(logit_choice(game.payoff(w), eta));
  }
}

Vec SamplingLogitRule::operator()(const Vec& x) const {
  std::vector<double> masses;
  multinomial_masses(table_, x, masses);
  Vec out = Vec::Zero(table_.n);
  for (std::size_t m = 0; m < masses.size(); ++m) {
    out += masses[m] * choice_at_outcome_[m];
  }
  return out;
}

SamplingBestResponseRule::SamplingBestResponseRule(const PopulationGame& game,
                                                   int k, TieRule ties, int max_k)
    : table_(make_outcome_table(game.actions(), k, max_k)) {
  response_at_outcome_.reserve(table_.states.size());
  for (const auto& w : table_.states) {
    response_at_outcome_.push_back(ties.mixed_response(game.payoff(w)));
  }
}

Vec SamplingBestResponseRule::operator()(const Vec& x) const {
  std::vector<double> masses;
  multinomial_masses(table_, x, masses);
  Vec out = Vec::Zero(table_.n);
  for (std::size_t m = 0; m < masses.size(); ++m) {
    out += masses[m] * response_at_outcome_[m];
  }
  return out;
}

Vec sampling_logit(const PopulationGame& game, const Vec& x, int k, double eta) {
  return SamplingLogitRule(game, k, eta)(x);
}

Vec sampling_best_response(const PopulationGame& game, const Vec& x, int k,
                           const TieRule& ties) {
  return SamplingBestResponseRule(game, k, ties)(x);
}

Centered logit_center(const Vec& values, const Vec& weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("logit_center: dimension mismatch");
  }
  Centered c;
  c.mean = weights.dot(values);
  c.centered = values.array() - c.mean;
  return c;
}

CenteredMats logit_center(const std::vector<Mat>& values, const Vec& weights) {
  if (static_cast<int>(values.size()) != weights.size()) {
    throw std::invalid_argument("logit_center: dimension mismatch");
  }
  CenteredMats c;
  c.mean = Mat::Zero(values[0].rows(), values[0].cols());
  for (std::size_t i = 0; i < values.size(); ++i) {
    c.mean += weights(static_cast<int>(i)) * values[i];
  }
  c.centered.reserve(values.size());
  for (const auto& m : values) c.centered.push_back(m - c.mean);
  return c;
}

}  // namespace sle
