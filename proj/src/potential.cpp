#include "sle/potential.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sle {

namespace {

Vec path_state(double t) {
  Vec x(2);
  x << t, 1.0 - t;
  return x;
}

double entropy(double t, double eta) {
  auto xlogx = [](double z) { return z > 0.0 ? z * std::log(z) : 0.0; };
  return -eta * (xlogx(t) + xlogx(1.0 - t));
}

// cumulative composite Simpson: one Simpson rule per grid interval, with a
// midpoint evaluation
Vec cumulative_simpson(const std::function<double(double)>& fn, const Vec& xs) {
  const int n = static_cast<int>(xs.size());
  Vec out(n);
  out(0) = 0.0;
  double prev = fn(xs(0));
  for (int i = 1; i < n; ++i) {
    const double hstep = xs(i) - xs(i - 1);
    const double mid = fn(0.5 * (xs(i - 1) + xs(i)));
    const double next = fn(xs(i));
    out(i) = out(i - 1) + (hstep / 6.0) * (prev + 4.0 * mid + next);
    prev = next;
  }
  return out;
}

std::vector<double> interior_roots(const std::function<double(double)>& fn,
                                   int scan_nodes) {
  // Uniform midpoints plus geometric ladders toward both boundaries: the
  // entropy barrier places stationary points exponentially close to the
  // corners (x_2 ~ exp(-slope/eta)), which a uniform scan cannot see. The
  // log singularities at 0 and 1 fix the outermost signs, so every root is
  // bracketed.
  std::vector<double> pts;
  const double first = 0.5 / scan_nodes;
  for (double t = 1e-15; t < first; t *= 4.0) pts.push_back(t);
  for (int i = 0; i < scan_nodes; ++i) {
    pts.push_back((i + 0.5) / scan_nodes);
  }
  for (double t = first; t > 1e-15; t /= 4.0) pts.push_back(1.0 - t);

  std::vector<double> roots;
  double prev_t = pts.front();
  double prev_v = fn(prev_t);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double t = pts[i];
    const double v = fn(t);
    if ((prev_v > 0.0) != (v > 0.0)) {
      double lo = prev_t, hi = t, vlo = prev_v;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (lo + hi);
        const double vm = fn(m);
        if ((vm > 0.0) == (vlo > 0.0)) {
          lo = m;
          vlo = vm;
        } else {
          hi = m;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

double simpson_on_interval(const std::function<double(double)>& fn, double a,
                           double b, int intervals) {
  double total = 0.0;
  const double hstep = (b - a) / intervals;
  double prev = fn(a);
  for (int i = 1; i <= intervals; ++i) {
    const double right = a + i * hstep;
    const double mid = right - 0.5 * hstep;
    const double next = fn(right);
    total += (hstep / 6.0) * (prev + 4.0 * fn(mid) + next);
    prev = next;
  }
  return total;
}

}  // namespace

PotentialProfile potential_profile(const PopulationGame& game, int k, double eta,
                                   int grid_size) {
  if (game.actions() != 2) {
    throw std::invalid_argument("potential_profile: two-action game required");
  }
  if (grid_size < 100) {
    throw std::invalid_argument("potential_profile: grid size >= 100 required");
  }
  if (!(eta > 0.0) || k < 1) {
    throw std::invalid_argument("potential_profile: k >= 1 and eta > 0 required");
  }

  PotentialProfile prof;
  prof.k = k;
  prof.eta = eta;
  prof.x1 = Vec::LinSpaced(grid_size, 0.0, 1.0);

  const PopulationGame* base = &game;
  prof.df = [base](double t) {
    const Vec f = base->payoff(path_state(t));
    return f(0) - f(1);
  };
  prof.dg = [base, k, eta](double t) {
    const PremiumReport rep = premiums(*base, path_state(t), k, eta);
    if (!rep.valid) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", t);
      throw std::domain_error(
          "potential_profile: premium multiplier is not positive on the "
          "integration path at t = " + std::string(buf));
    }
    return rep.distortion(0) - rep.distortion(1);
  };
  prof.dh = [eta](double t) { return -eta * (std::log(t) - std::log(1.0 - t)); };

  prof.f = cumulative_simpson(prof.df, prof.x1);
  prof.g = cumulative_simpson(prof.dg, prof.x1);
  prof.h.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) prof.h(i) = entropy(prof.x1(i), eta);
  prof.f_eta = prof.f + prof.h;
  prof.f_k_eta = prof.f + prof.g + prof.h;

  const int scan = std::max(4 * grid_size, 4001);
  auto df = prof.df;
  auto dg = prof.dg;
  auto dh = prof.dh;
  prof.stationary_f = interior_roots(df, scan);
  prof.stationary_g = interior_roots(dg, scan);
  prof.stationary_h = interior_roots(dh, scan);
  prof.stationary_f_eta =
      interior_roots([&](double t) { return df(t) + dh(t); }, scan);
  prof.stationary_f_k_eta =
      interior_roots([&](double t) { return df(t) + dg(t) + dh(t); }, scan);
  return prof;
}

std::vector<double> stationary_points(const PotentialProfile& profile) {
  return profile.stationary_f_k_eta;
}

double potential_increment(const PotentialProfile& profile, double x1_from,
                           double x1_to) {
  if (x1_from == x1_to) return 0.0;
  auto deriv = [&](double t) {
    return profile.df(t) + profile.dg(t) + profile.dh(t);
  };
  return simpson_on_interval(deriv, x1_from, x1_to, 8);
}

GShapeReport classify_g_shape(const LinearGame& game, int k, double eta,
                              int grid_size) {
  if (game.actions() != 2) {
    throw std::invalid_argument("classify_g_shape: two-action game required");
  }
  const Mat& m = game.matrix();
  const double beta = (m(0, 0) - m(1, 0)) - (m(0, 1) - m(1, 1));

  const PotentialProfile prof = potential_profile(game, k, eta, grid_size);
  GShapeReport rep;
  rep.boundary_slope_0 = prof.dg(0.0);
  rep.boundary_slope_1 = prof.dg(1.0);

  if (beta == 0.0) {
    rep.shape = prof.g.cwiseAbs().maxCoeff() < 1e-10 ? GShape::Zero
                                                     : GShape::Inconclusive;
    return rep;
  }
  const double xs = (m(1, 1) - m(0, 1)) / beta;
  if (!(xs > 0.0 && xs < 1.0)) {
    throw std::invalid_argument(
        "classify_g_shape: interior Nash equilibrium required when beta != 0");
  }
  rep.nash_x1 = xs;

  const double cell = 1.0 / (grid_size - 1);
  // expected sign of dg away from x*: +sign(beta) below, -sign(beta) above
  const double sb = beta > 0.0 ? 1.0 : -1.0;
  for (int i = 1; i + 1 < grid_size; ++i) {
    const double t = prof.x1(i);
    if (std::abs(t - xs) <= cell) continue;
    const double want = t < xs ? sb : -sb;
    const double have = prof.dg(t);
    if (have * want < 0.0 && std::abs(have) > 1e-12) {
      rep.witnesses.push_back(t);
    }
  }

  int ext = 0;
  for (int i = 1; i < grid_size; ++i) {
    const bool better = beta > 0.0 ? prof.g(i) > prof.g(ext) : prof.g(i) < prof.g(ext);
    if (better) ext = i;
  }
  rep.extremum_x1 = prof.x1(ext);

  const bool extremum_ok = std::abs(rep.extremum_x1 - xs) <= cell + 1e-12;
  const bool boundary_ok = std::abs(rep.boundary_slope_0) < 1e-8 &&
                           std::abs(rep.boundary_slope_1) < 1e-8;
  if (rep.witnesses.empty() && extremum_ok && boundary_ok) {
    rep.shape = beta > 0.0 ? GShape::QuasiconcaveMaxAtNash
                           : GShape::QuasiconvexMinAtNash;
  }
  return rep;
}

}  // namespace sle
