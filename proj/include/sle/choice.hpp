#pragma once

#include <string>
#include <vector>

#include "sle/game.hpp"
#include "sle/sampling.hpp"
#include "sle/simplex.hpp"

namespace sle {

// Actions within tol of the maximum payoff. Always nonempty.
struct BestResponseSet {
  std::vector<int> actions;
  double tol = 1e-9;
};

BestResponseSet best_response_set(const Vec& payoffs, double tol = 1e-9);
BestResponseSet best_response_set(const PopulationGame& game, const Vec& x,
                                  double tol = 1e-9);

// Selection of a mixed best response at ties. The best-response
// correspondence needs a measurable selection before it can drive an
// expectation or a dynamic; uniform mixing over the argmax set is the
// default. Sample states z/k frequently hit exact indifference lines, hence
// the payoff slack.
class TieRule {
 public:
  static TieRule uniform(double tol = 1e-9);
  static TieRule lowest_index(double tol = 1e-9);
  // Prefers `action` whenever it attains the maximum, otherwise mixes
  // uniformly over the argmax set.
  static TieRule sticky(int action, double tol = 1e-9);

  Vec mixed_response(const Vec& payoffs) const;
  double tol() const { return tol_; }
  std::string label() const;

 private:
  enum class Kind { kUniform, kLowestIndex, kSticky };
  TieRule(Kind kind, int action, double tol)
      : kind_(kind), action_(action), tol_(tol) {}
  Kind kind_;
  int action_;
  double tol_;
};

// P^eta: softmax of F(x)/eta with max-shift stabilization. Strictly
// positive; requires eta > 0.
Vec logit_choice(const Vec& payoffs, double eta);
Vec logit_choice(const PopulationGame& game, const Vec& x, double eta);

// Rule objects precompute everything that does not depend on x, so that a
// rule evaluation is a single positive mixture over sample outcomes. All of
// them are pure and safe to share across threads.

class LogitRule {
 public:
  LogitRule(const PopulationGame& game, double eta);
  Vec operator()(const Vec& x) const;
  double eta() const { return eta_; }

 private:
  const PopulationGame* game_;
  double eta_;
};

class BestResponseRule {
 public:
  BestResponseRule(const PopulationGame& game, TieRule ties = TieRule::uniform());
  Vec operator()(const Vec& x) const;

 private:
  const PopulationGame* game_;
  TieRule ties_;
};

// L^{k,eta}(x) = sum_z M^k(z|x) P^eta(z/k). The per-outcome logit choices
// are x-independent and cached at construction.
class SamplingLogitRule {
 public:
  SamplingLogitRule(const PopulationGame& game, int k, double eta, int max_k = 0);
  Vec operator()(const Vec& x) const;
  int k() const { return table_.k; }
  double eta() const { return eta_; }
  const OutcomeTable& table() const { return table_; }

 private:
  OutcomeTable table_;
  std::vector<Vec> choice_at_outcome_;
  double eta_;
};

// BR^k with a fixed tie selection: sum_z M^k(z|x) alpha(z/k).
class SamplingBestResponseRule {
 public:
  SamplingBestResponseRule(const PopulationGame& game, int k,
                           TieRule ties = TieRule::uniform(), int max_k = 0);
  Vec operator()(const Vec& x) const;
  int k() const { return table_.k; }

 private:
  OutcomeTable table_;
  std::vector<Vec> response_at_outcome_;
};

// One-shot conveniences.
Vec sampling_logit(const PopulationGame& game, const Vec& x, int k, double eta);
Vec sampling_best_response(const PopulationGame& game, const Vec& x, int k,
                           const TieRule& ties = TieRule::uniform());

// Logit-weighted average and centering: mean = sum_i p_i y_i,
// centered_i = y_i - mean, so sum_i p_i centered_i = 0.
struct Centered {
  double mean;
  Vec centered;
};
Centered logit_center(const Vec& values, const Vec& weights);

struct CenteredMats {
  Mat mean;
  std::vector<Mat> centered;
};
CenteredMats logit_center(const std::vector<Mat>& values, const Vec& weights);

}  // namespace sle
