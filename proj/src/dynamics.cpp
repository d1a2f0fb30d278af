#include "sle/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sle/parallel.hpp"

namespace sle {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

constexpr double kNegativeWindow = -1e-12;
constexpr double kAttractorRadius = 1e-4;

}  // namespace

DynamicSpec DynamicSpec::brd(TieRule ties) {
  DynamicSpec s;
  s.kind = DynamicKind::BestResponse;
  s.ties = ties;
  return s;
}

DynamicSpec DynamicSpec::sbrd(int k, TieRule ties) {
  DynamicSpec s;
  s.kind = DynamicKind::SamplingBestResponse;
  s.k = k;
  s.ties = ties;
  return s;
}

DynamicSpec DynamicSpec::ld(double eta) {
  DynamicSpec s;
  s.kind = DynamicKind::Logit;
  s.eta = eta;
  return s;
}

DynamicSpec DynamicSpec::sld(int k, double eta) {
  DynamicSpec s;
  s.kind = DynamicKind::SamplingLogit;
  s.k = k;
  s.eta = eta;
  return s;
}

std::string DynamicSpec::label() const {
  switch (kind) {
    case DynamicKind::BestResponse:
      return "BRD";
    case DynamicKind::SamplingBestResponse:
      return "SBRD(k=" + std::to_string(k) + ")";
    case DynamicKind::Logit:
      return "LD(eta=" + fmt(eta) + ")";
    case DynamicKind::SamplingLogit:
      return "SLD(k=" + std::to_string(k) + ",eta=" + fmt(eta) + ")";
  }
  return "?";
}

SimplexMap DynamicSpec::make_rule(const PopulationGame& game) const {
  switch (kind) {
    case DynamicKind::BestResponse: {
      BestResponseRule r(game, ties);
      return [r](const Vec& x) { return r(x); };
    }
    case DynamicKind::SamplingBestResponse: {
      auto r = std::make_shared<SamplingBestResponseRule>(game, k, ties);
      return [r](const Vec& x) { return (*r)(x); };
    }
    case DynamicKind::Logit: {
      LogitRule r(game, eta);
      return [r](const Vec& x) { return r(x); };
    }
    case DynamicKind::SamplingLogit: {
      auto r = std::make_shared<SamplingLogitRule>(game, k, eta);
      return [r](const Vec& x) { return (*r)(x); };
    }
  }
  throw std::logic_error("DynamicSpec::make_rule: unknown kind");
}

Trajectory integrate_map(const SimplexMap& map, StepperKind stepper,
                         const Vec& x0, const IntegrateOptions& opts) {
  if (!(opts.dt > 0.0)) throw std::invalid_argument("integrate_map: dt > 0 required");
  Vec x = PopulationState(x0).weights();
  auto field = [&map](const Vec& y) -> Vec { return map(y) - y; };

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  Vec v = field(x);
  double t = 0.0;
  while (true) {
    if (v.cwiseAbs().maxCoeff() <= opts.conv_tol) {
      traj.flag = TerminalFlag::Converged;
      return traj;
    }
    if (t >= opts.t_max) {
      traj.flag = TerminalFlag::MaxTime;
      return traj;
    }
    Vec xn;
    if (stepper == StepperKind::Euler) {
      xn = x + opts.dt * v;
    } else {
      const Vec k1 = v;
      const Vec k2 = field(x + 0.5 * opts.dt * k1);
      const Vec k3 = field(x + 0.5 * opts.dt * k2);
      const Vec k4 = field(x + opts.dt * k3);
      xn = x + (opts.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!xn.allFinite() || xn.minCoeff() < kNegativeWindow) {
      traj.flag = TerminalFlag::StepFailure;
      return traj;
    }
    for (int i = 0; i < xn.size(); ++i) xn(i) = std::max(xn(i), 0.0);
    xn /= xn.sum();
    t += opts.dt;
    x = std::move(xn);
    v = field(x);
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
}

Trajectory integrate(const DynamicSpec& spec, const PopulationGame& game,
                     const Vec& x0, IntegrateOptions opts) {
  if (opts.dt <= 0.0) opts.dt = spec.smooth() ? 0.01 : 0.005;
  const auto rule = spec.make_rule(game);
  const auto stepper =
      spec.smooth() ? StepperKind::RungeKutta4 : StepperKind::Euler;
  return integrate_map(rule, stepper, x0, opts);
}

VectorFieldGrid vector_field_map(const SimplexMap& map, int n, int resolution) {
  if (resolution < 2) throw std::invalid_argument("vector_field: resolution >= 2");
  VectorFieldGrid grid;
  grid.points = barycentric_lattice(n, resolution);
  grid.velocities.resize(grid.points.size());
  grid.speeds.resize(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t i) {
    Vec v = map(grid.points[i]) - grid.points[i];
    grid.speeds[i] = v.norm();
    grid.velocities[i] = std::move(v);
  });
  return grid;
}

VectorFieldGrid vector_field(const DynamicSpec& spec, const PopulationGame& game,
                             int resolution) {
  return vector_field_map(spec.make_rule(game), game.actions(), resolution);
}

BasinReport basin_report(const DynamicSpec& spec, const PopulationGame& game,
                         int grid_resolution, IntegrateOptions opts) {
  if (opts.dt <= 0.0) opts.dt = spec.smooth() ? 0.01 : 0.005;
  const auto rule = spec.make_rule(game);
  const auto stepper =
      spec.smooth() ? StepperKind::RungeKutta4 : StepperKind::Euler;

  BasinReport report;
  report.starts = interior_lattice(game.actions(), grid_resolution);
  std::vector<Vec> terminals(report.starts.size());
  std::vector<bool> converged(report.starts.size(), false);
  parallel_for(report.starts.size(), [&](std::size_t i) {
    Trajectory traj = integrate_map(rule, stepper, report.starts[i], opts);
    terminals[i] = traj.terminal();
    converged[i] = traj.flag == TerminalFlag::Converged;
  });

  std::vector<Vec> converged_terminals;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (converged[i]) converged_terminals.push_back(terminals[i]);
  }
  const auto clusters = cluster_states(converged_terminals, kAttractorRadius);
  report.attractors = clusters.representatives;

  report.attractor_of.assign(report.starts.size(), -1);
  std::vector<int> counts(report.attractors.size(), 0);
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (!converged[i]) {
      ++report.unconverged;
      continue;
    }
    int best = -1;
    double best_d = kAttractorRadius;
    for (std::size_t c = 0; c < report.attractors.size(); ++c) {
      const double d =
          (terminals[i] - report.attractors[c]).cwiseAbs().maxCoeff();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    report.attractor_of[i] = best;
    if (best >= 0) ++counts[best];
  }
  const int total_converged =
      static_cast<int>(report.starts.size()) - report.unconverged;
  report.fractions.resize(report.attractors.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    report.fractions[c] =
        total_converged > 0 ? static_cast<double>(counts[c]) / total_converged : 0.0;
  }
  return report;
}

}  // namespace sle
