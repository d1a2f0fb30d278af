#include "sle/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace sle {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double residual_inf(const Vec& fx, const Vec& x) {
  return (fx - x).cwiseAbs().maxCoeff();
}

Vec clamp_renormalize(Vec x) {
  for (int i = 0; i < x.size(); ++i) x(i) = std::max(x(i), 0.0);
  const double s = x.sum();
  if (s > 0.0) x /= s;
  return x;
}

// Spectral radius of DF at x on the tangent space, estimated by power
// iteration on one-sided finite-difference Jacobian-vector products.
double spectral_radius_estimate(const SimplexMap& rule, const Vec& x,
                                const Vec& fx) {
  const int n = static_cast<int>(x.size());
  const double h = 1e-6;
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = (i % 2 == 0) ? 1.0 : -1.0;
  u.array() -= u.mean();
  if (u.cwiseAbs().maxCoeff() == 0.0) {
    u.setZero();
    u(0) = 1.0;
    u(n - 1) = -1.0;
  }
  u /= u.norm();
  double rho = 0.0;
  for (int it = 0; it < 12; ++it) {
    Vec ju = (rule(x + h * u) - fx) / h;
    ju.array() -= ju.mean();
    const double norm = ju.norm();
    if (norm < 1e-14) return 0.0;
    rho = norm;
    u = ju / norm;
  }
  return rho;
}

// Safeguarded Newton on reduced coordinates u = x_0..x_{n-2}, with
// x_{n-1} = 1 - sum(u). Steps are accepted only if the residual decreases.
// Once below tol we keep polishing for a few more accepted steps: the
// residual-to-state conditioning can be poor (near-identity maps), so the
// extra steps buy several digits in x at negligible cost.
bool newton_iterate(const SimplexMap& rule, Vec& x, Vec& fx, double& res,
                    double tol, int max_steps) {
  const int n = static_cast<int>(x.size());
  const int m = n - 1;
  const double h = 1e-7;
  int polish_left = 3;
  for (int step = 0; step < max_steps; ++step) {
    if (res <= tol && polish_left-- <= 0) return true;
    Mat jac(m, m);
    const Vec r = (fx - x).head(m);
    for (int j = 0; j < m; ++j) {
      Vec xp = x, xm = x;
      xp(j) += h;
      xp(n - 1) -= h;
      xm(j) -= h;
      xm(n - 1) += h;
      jac.col(j) = ((rule(xp) - rule(xm)) / (2.0 * h)).head(m);
      jac(j, j) -= 1.0;
    }
    const Vec delta = Eigen::PartialPivLU<Mat>(jac).solve(-r);
    if (!delta.allFinite()) return false;
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 14; ++bt, lambda *= 0.5) {
      Vec cand = x;
      cand.head(m) += lambda * delta;
      cand(n - 1) -= lambda * delta.sum();
      if (cand.minCoeff() < -1e-9) continue;
      cand = clamp_renormalize(std::move(cand));
      const Vec fc = rule(cand);
      const double rc = residual_inf(fc, cand);
      if (rc < res || rc <= tol) {
        x = std::move(cand);
        fx = fc;
        res = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) return res <= tol;
  }
  return res <= tol;
}

}  // namespace

EquilibriumResult solve_fixed_point(const SimplexMap& rule, const Vec& x0,
                                    const SolverOptions& opts) {
  Vec x = PopulationState(x0).weights();
  Vec fx = rule(x);
  double res = residual_inf(fx, x);
  std::string solver = "iteration";

  if (opts.newton_first && opts.newton_polish) {
    newton_iterate(rule, x, fx, res, opts.tol, 60);
    solver = "newton";
  }

  if (res > opts.tol) {
    const double newton_gate = opts.newton_polish ? 1e-9 : opts.tol;
    double alpha = opts.damping;
    bool contraction_checked = false;
    Vec best_x = x;
    double best_res = res;
    double window_res = res;
    int window_start = 0;
    for (int iter = 0; iter < opts.max_iter && res > newton_gate; ++iter) {
      if (!contraction_checked && res < 1e-3) {
        contraction_checked = true;
        if (spectral_radius_estimate(rule, x, fx) < 0.9) alpha = 1.0;
      }
      x = clamp_renormalize((1.0 - alpha) * x + alpha * fx);
      fx = rule(x);
      res = residual_inf(fx, x);
      if (res < best_res) {
        best_res = res;
        best_x = x;
      }
      if (iter - window_start >= 60) {
        if (res > 0.95 * window_res) break;  // stalled; hand over to Newton
        window_res = res;
        window_start = iter;
      }
    }
    if (res > best_res) {
      x = best_x;
      fx = rule(x);
      res = residual_inf(fx, x);
    }
    if (opts.newton_polish) {
      newton_iterate(rule, x, fx, res, opts.tol, 60);
      solver = opts.newton_first ? "newton" : "iteration+newton";
    }
  }

  // Logit-family maps are strictly positive mixtures; one extra application
  // restores interior entries that rounding flushed to zero.
  if (res <= opts.tol && x.minCoeff() <= 0.0) {
    const Vec y = fx;
    if (y.minCoeff() > 0.0) {
      const Vec fy = rule(y);
      const double ry = residual_inf(fy, y);
      if (ry <= std::max(res, opts.tol)) {
        x = y;
        fx = fy;
        res = ry;
      }
    }
  }

  EquilibriumResult out;
  out.state = std::move(x);
  out.residual = res;
  out.converged = res <= opts.tol;
  out.solver = std::move(solver);
  return out;
}

EquilibriumResult solve_sle_fixed_point(const PopulationGame& game, int k,
                                        double eta, const Vec& x0,
                                        const SolverOptions& opts) {
  SamplingLogitRule rule(game, k, eta);
  auto out = solve_fixed_point([&rule](const Vec& x) { return rule(x); }, x0, opts);
  out.rule = "SLE(k=" + std::to_string(k) + ",eta=" + fmt(eta) + ")";
  return out;
}

EquilibriumResult solve_sle_k1(const PopulationGame& game, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("solve_sle_k1: eta > 0 required");
  const int n = game.actions();
  Mat pi(n, n);
  for (int j = 0; j < n; ++j) {
    Vec ej = Vec::Zero(n);
    ej(j) = 1.0;
    pi.col(j) = logit_choice(game.payoff(ej), eta);
  }
  // Squaring terminates on column agreement, the structural signature of
  // the rank-one limit. The residual alone is useless as a stopping rule
  // when the spectral gap underflows: Pi = I + O(1e-22) makes every state a
  // numerical fixed point, but the stationary distribution is still well
  // defined and the squaring iteration still finds it.
  const Vec ones_over_n = Vec::Constant(n, 1.0 / n);
  Mat b = pi;
  auto column_spread = [n](const Mat& m) {
    double spread = 0.0;
    for (int j = 1; j < n; ++j) {
      spread = std::max(spread, (m.col(j) - m.col(0)).cwiseAbs().maxCoeff());
    }
    return spread;
  };
  for (int t = 0; t < 200 && column_spread(b) > 1e-15; ++t) {
    b = b * b;
    for (int j = 0; j < n; ++j) b.col(j) /= b.col(j).sum();
  }
  Vec x = b * ones_over_n;
  x /= x.sum();
  const double res = residual_inf(pi * x, x);
  EquilibriumResult out;
  out.state = std::move(x);
  out.residual = res;
  out.converged = res <= 1e-12;
  out.rule = "SLE(k=1,eta=" + fmt(eta) + ")";
  out.solver = "eigenvector";
  return out;
}

namespace {

// Root in (0,1) of a y^2 + b y + c; the fixed-point polynomial satisfies
// f(0) > 0 > f(1), so exactly one root lies inside.
double quadratic_root_01(double a, double b, double c) {
  auto f = [&](double t) { return (a * t + b) * t + c; };
  double y = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(a) < 1e-14) {
    if (b != 0.0) y = -c / b;
  } else {
    const double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + std::copysign(sq, b));
    const double r1 = qq / a;
    const double r2 = qq != 0.0 ? c / qq : std::numeric_limits<double>::quiet_NaN();
    const bool r1_in = r1 > 0.0 && r1 < 1.0;
    const bool r2_in = std::isfinite(r2) && r2 > 0.0 && r2 < 1.0;
    if (r1_in && r2_in) {
      y = std::abs(f(r1)) <= std::abs(f(r2)) ? r1 : r2;
    } else if (r1_in) {
      y = r1;
    } else if (r2_in) {
      y = r2;
    }
  }
  if (!std::isfinite(y) || y <= 0.0 || y >= 1.0) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    y = 0.5 * (lo + hi);
  }
  for (int i = 0; i < 2; ++i) {
    const double fp = 2.0 * a * y + b;
    if (fp == 0.0) break;
    const double cand = y - f(y) / fp;
    if (cand > 0.0 && cand < 1.0) y = cand;
  }
  return y;
}

}  // namespace

EquilibriumResult solve_sle_k2_two_action(const PopulationGame& game,
                                          double eta) {
  if (game.actions() != 2) {
    throw std::invalid_argument("solve_sle_k2_two_action: two-action game required");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("solve_sle_k2_two_action: eta > 0 required");
  }
  Vec e1(2), e2(2), mid(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  mid << 0.5, 0.5;
  const Vec p_e1 = logit_choice(game.payoff(e1), eta);
  const Vec p_mid = logit_choice(game.payoff(mid), eta);
  const Vec p_e2 = logit_choice(game.payoff(e2), eta);
  const double q0 = p_e2(0), q1 = p_mid(0), q2 = p_e1(0);
  const double y = quadratic_root_01(q2 - 2.0 * q1 + q0, 2.0 * (q1 - q0) - 1.0, q0);
  // Complementary polynomial in x_2; its coefficients come straight out of
  // the softmax, so a root within 1e-40 of a vertex is still resolved.
  const double s0 = p_e1(1), s1 = p_mid(1), s2 = p_e2(1);
  const double u = quadratic_root_01(s2 - 2.0 * s1 + s0, 2.0 * (s1 - s0) - 1.0, s0);
  Vec x(2);
  if (y <= 0.5) {
    x << y, 1.0 - y;
  } else {
    x << 1.0 - u, u;
  }
  SamplingLogitRule rule(game, 2, eta);
  EquilibriumResult out;
  out.residual = residual_inf(rule(x), x);
  out.state = std::move(x);
  out.converged = out.residual <= 1e-12;
  out.rule = "SLE(k=2,eta=" + fmt(eta) + ")";
  out.solver = "quadratic";
  return out;
}

std::vector<Vec> multistart_seeds(int n, int min_count) {
  std::vector<Vec> seeds;
  seeds.push_back(Vec::Constant(n, 1.0 / n));
  for (int i = 0; i < n; ++i) {
    seeds.push_back(PopulationState::near_vertex(n, i).weights());
  }
  const int base = static_cast<int>(seeds.size());
  if (base >= min_count) return seeds;
  for (int res = n + 1; res < 100000; ++res) {
    if (outcome_count(n, res - n) + base >= min_count) {
      for (auto& p : interior_lattice(n, res)) seeds.push_back(std::move(p));
      return seeds;
    }
  }
  return seeds;
}

std::vector<EquilibriumResult> multistart(const SimplexMap& rule, int n,
                                          int min_seeds,
                                          const SolverOptions& opts) {
  std::vector<EquilibriumResult> results;
  for (const Vec& seed : multistart_seeds(n, min_seeds)) {
    results.push_back(solve_fixed_point(rule, seed, opts));
  }
  return results;
}

ClusterReport cluster_states(const std::vector<Vec>& states, double radius) {
  std::vector<Vec> sorted = states;
  std::sort(sorted.begin(), sorted.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  });
  ClusterReport rep;
  for (const Vec& s : sorted) {
    bool placed = false;
    for (std::size_t c = 0; c < rep.representatives.size(); ++c) {
      if ((s - rep.representatives[c]).cwiseAbs().maxCoeff() < radius) {
        ++rep.sizes[c];
        placed = true;
        break;
      }
    }
    if (!placed) {
      rep.representatives.push_back(s);
      rep.sizes.push_back(1);
    }
  }
  return rep;
}

double max_pairwise_distance(const std::vector<Vec>& states) {
  double d = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      d = std::max(d, (states[i] - states[j]).cwiseAbs().maxCoeff());
    }
  }
  return d;
}

namespace {

// All interior fixed points of a two-action map, by dense sign scan of
// F_1(y, 1-y) - y plus bisection.
std::vector<double> scan_roots_two_action(const SimplexMap& rule, int resolution) {
  auto g = [&](double y) {
    Vec x(2);
    x << y, 1.0 - y;
    return rule(x)(0) - y;
  };
  std::vector<double> roots;
  double prev_y = 0.0;
  double prev_g = g(0.0);
  for (int i = 1; i <= resolution; ++i) {
    const double y = static_cast<double>(i) / resolution;
    const double gy = g(y);
    if ((prev_g > 0.0) != (gy > 0.0)) {
      double lo = prev_y, hi = y, glo = prev_g;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (lo + hi);
        const double gm = g(m);
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = m;
          glo = gm;
        } else {
          hi = m;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_y = y;
    prev_g = gy;
  }
  return roots;
}

std::optional<std::pair<Vec, double>> corrector(const SimplexMap& rule,
                                                const Vec& warm,
                                                const SolverOptions& sopts,
                                                double step_bound) {
  SolverOptions o = sopts;
  o.newton_first = true;
  auto res = solve_fixed_point(rule, warm, o);
  if (!res.converged) return std::nullopt;
  if ((res.state - warm).cwiseAbs().maxCoeff() > step_bound) return std::nullopt;
  return std::make_pair(res.state, res.residual);
}

std::optional<std::pair<Vec, double>> continuation_step(
    const RuleFactory& factory, double eta_from, const Vec& x_from,
    double eta_to, const ContinuationOptions& opts) {
  double cur_eta = eta_from;
  Vec cur_x = x_from;
  double step = eta_to - eta_from;
  for (int guard = 0; guard < 400; ++guard) {
    double next_eta = cur_eta + step;
    if ((step < 0.0 && next_eta < eta_to) || (step > 0.0 && next_eta > eta_to)) {
      next_eta = eta_to;
    }
    auto rule = factory(next_eta);
    auto corr = corrector(rule, cur_x, opts.solver, opts.step_bound);
    if (corr) {
      cur_eta = next_eta;
      cur_x = corr->first;
      if (cur_eta == eta_to) return std::make_pair(cur_x, corr->second);
    } else {
      step *= 0.5;  // halve on corrector failure, floor at min_deta
      if (std::abs(step) < opts.min_deta) return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<Vec, double>> initial_solve(const SimplexMap& rule,
                                                    int n, const Vec& seed,
                                                    const ContinuationOptions& opts) {
  if (n == 2) {
    const auto roots = scan_roots_two_action(rule, opts.scan_resolution);
    if (roots.empty()) return std::nullopt;
    const double y0 = seed(0);
    double best = roots.front();
    for (double r : roots) {
      if (std::abs(r - y0) < std::abs(best - y0)) best = r;
    }
    Vec x(2);
    x << best, 1.0 - best;
    SolverOptions o = opts.solver;
    o.newton_first = true;
    auto res = solve_fixed_point(rule, x, o);
    if (!res.converged) return std::nullopt;
    return std::make_pair(res.state, res.residual);
  }
  auto res = solve_fixed_point(rule, seed, opts.solver);
  if (!res.converged) return std::nullopt;
  return std::make_pair(res.state, res.residual);
}

struct IndexedCurve {
  int first_idx = 0;  // grid index of the first stored point
  EquilibriumCurve curve;
  int last_idx() const {
    return first_idx + static_cast<int>(curve.states.size()) - 1;
  }
};

}  // namespace

std::vector<EquilibriumCurve> trace_equilibrium_curves(
    const RuleFactory& factory, int n, const std::vector<double>& eta_grid,
    const std::vector<Vec>& seeds, const ContinuationOptions& opts) {
  if (eta_grid.empty()) {
    throw std::invalid_argument("trace_equilibrium_curves: empty eta grid");
  }
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > 0.0)) {
      throw std::invalid_argument("trace_equilibrium_curves: eta must be positive");
    }
    if (i > 0 && !(eta_grid[i] < eta_grid[i - 1])) {
      throw std::invalid_argument(
          "trace_equilibrium_curves: eta grid must be strictly decreasing");
    }
  }
  if (seeds.empty()) {
    throw std::invalid_argument("trace_equilibrium_curves: need at least one seed");
  }
  const int g = static_cast<int>(eta_grid.size());

  std::vector<IndexedCurve> curves;

  auto trace_from = [&](int start_idx, const Vec& x_start, double res_start,
                        int direction) {
    std::vector<int> idxs{start_idx};
    std::vector<Vec> xs{x_start};
    std::vector<double> rs{res_start};
    bool truncated = false;
    int i = start_idx;
    Vec x = x_start;
    while (true) {
      const int j = i + direction;
      if (j < 0 || j >= g) break;
      auto stepres = continuation_step(factory, eta_grid[i], x, eta_grid[j], opts);
      if (!stepres) {
        truncated = true;
        break;
      }
      x = stepres->first;
      idxs.push_back(j);
      xs.push_back(x);
      rs.push_back(stepres->second);
      i = j;
    }
    if (direction < 0) {
      std::reverse(idxs.begin(), idxs.end());
      std::reverse(xs.begin(), xs.end());
      std::reverse(rs.begin(), rs.end());
    }
    IndexedCurve c;
    c.first_idx = idxs.front();
    for (int idx : idxs) c.curve.eta.push_back(eta_grid[idx]);
    c.curve.states = std::move(xs);
    c.curve.residuals = std::move(rs);
    c.curve.truncated = truncated;
    curves.push_back(std::move(c));
  };

  // descending pass, one branch per seed
  {
    auto rule0 = factory(eta_grid.front());
    for (const Vec& seed : seeds) {
      if (auto init = initial_solve(rule0, n, seed, opts)) {
        trace_from(0, init->first, init->second, +1);
      }
    }
  }
  // ascending pass from the small-eta end, where folds may hide branches
  if (g > 1) {
    auto rule_min = factory(eta_grid.back());
    std::vector<Vec> starts;
    if (n == 2) {
      for (double r : scan_roots_two_action(rule_min, opts.scan_resolution)) {
        Vec x(2);
        x << r, 1.0 - r;
        starts.push_back(std::move(x));
      }
    } else {
      starts = seeds;
    }
    for (const Vec& s : starts) {
      if (auto init = initial_solve(rule_min, n, s, opts)) {
        trace_from(g - 1, init->first, init->second, -1);
      }
    }
  }

  // deduplicate branches that coincide on their shared grid range
  std::vector<IndexedCurve> kept;
  for (auto& cand : curves) {
    bool duplicate = false;
    for (auto& have : kept) {
      const int lo = std::max(cand.first_idx, have.first_idx);
      const int hi = std::min(cand.last_idx(), have.last_idx());
      if (lo > hi) continue;
      bool same = true;
      for (int idx = lo; idx <= hi && same; ++idx) {
        const Vec& a = cand.curve.states[idx - cand.first_idx];
        const Vec& b = have.curve.states[idx - have.first_idx];
        if ((a - b).cwiseAbs().maxCoeff() >= opts.dedup_tol) same = false;
      }
      if (!same) continue;
      duplicate = true;
      // keep whichever covers more of the grid
      if (cand.curve.states.size() > have.curve.states.size()) {
        have = std::move(cand);
      }
      break;
    }
    if (!duplicate) kept.push_back(std::move(cand));
  }

  std::vector<EquilibriumCurve> out;
  for (std::size_t b = 0; b < kept.size(); ++b) {
    kept[b].curve.branch = static_cast<int>(b);
    out.push_back(std::move(kept[b].curve));
  }
  return out;
}

std::vector<EquilibriumCurve> solve_logit_continuation(
    const PopulationGame& game, const std::vector<double>& eta_grid,
    const std::vector<Vec>& seeds, const ContinuationOptions& opts) {
  RuleFactory factory = [&game](double eta) -> SimplexMap {
    LogitRule r(game, eta);
    return [r](const Vec& x) { return r(x); };
  };
  return trace_equilibrium_curves(factory, game.actions(), eta_grid, seeds, opts);
}

std::vector<double> TwoActionNash::all() const {
  std::vector<double> v = pure;
  if (interior) v.push_back(*interior);
  std::sort(v.begin(), v.end());
  return v;
}

TwoActionNash nash_two_action_linear(const Mat& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument("nash_two_action_linear: 2x2 matrix required");
  }
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double beta = (a - c) - (b - d);
  TwoActionNash out;
  if (beta == 0.0) {
    out.degenerate = true;
    return out;
  }
  if (d >= b) out.pure.push_back(0.0);  // e2 best-responds to itself
  if (a >= c) out.pure.push_back(1.0);  // e1 best-responds to itself
  const double xs = (d - b) / beta;
  if (xs > 0.0 && xs < 1.0) out.interior = xs;
  return out;
}

}  // namespace sle
