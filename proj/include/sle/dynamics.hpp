#pragma once

#include <string>
#include <vector>

#include "sle/choice.hpp"
#include "sle/equilibrium.hpp"
#include "sle/game.hpp"

namespace sle {

enum class DynamicKind { BestResponse, SamplingBestResponse, Logit, SamplingLogit };

// One of the four population dynamics xdot = rule(x) - x. The two
// best-response dynamics are differential inclusions; we integrate one
// fixed selection (the tie rule) with forward Euler, which reproduces
// generic trajectories but not sliding solutions on indifference manifolds.
struct DynamicSpec {
  DynamicKind kind = DynamicKind::Logit;
  int k = 1;
  double eta = 0.1;
  TieRule ties = TieRule::uniform();

  static DynamicSpec brd(TieRule ties = TieRule::uniform());
  static DynamicSpec sbrd(int k, TieRule ties = TieRule::uniform());
  static DynamicSpec ld(double eta);
  static DynamicSpec sld(int k, double eta);

  bool smooth() const {
    return kind == DynamicKind::Logit || kind == DynamicKind::SamplingLogit;
  }
  std::string label() const;
  SimplexMap make_rule(const PopulationGame& game) const;
};

enum class StepperKind { RungeKutta4, Euler };
enum class TerminalFlag { Converged, MaxTime, StepFailure };

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  TerminalFlag flag = TerminalFlag::MaxTime;
  const Vec& terminal() const { return states.back(); }
};

struct IntegrateOptions {
  double dt = 0.0;  // 0 = per-rule default: 0.01 smooth, 0.005 best-response
  double t_max = 200.0;
  double conv_tol = 1e-9;
};

// Fixed-step integration of xdot = map(x) - x; states are clamped
// (entries >= -1e-12 tolerated) and renormalized every step. Stops when
// ||map(x) - x||_inf <= conv_tol, t exceeds t_max, or a step produces a
// non-finite or infeasible state.
Trajectory integrate_map(const SimplexMap& map, StepperKind stepper,
                         const Vec& x0, const IntegrateOptions& opts);

Trajectory integrate(const DynamicSpec& spec, const PopulationGame& game,
                     const Vec& x0, IntegrateOptions opts = {});

struct VectorFieldGrid {
  std::vector<Vec> points;
  std::vector<Vec> velocities;  // tangent: components sum to 0
  std::vector<double> speeds;
};

VectorFieldGrid vector_field_map(const SimplexMap& map, int n, int resolution);
VectorFieldGrid vector_field(const DynamicSpec& spec, const PopulationGame& game,
                             int resolution);

// Integrates every interior lattice start and clusters the terminal states
// of converged runs (radius 1e-4). Attractors are sorted lexicographically.
struct BasinReport {
  std::vector<Vec> starts;
  std::vector<int> attractor_of;  // index into attractors, -1 if unconverged
  std::vector<Vec> attractors;
  std::vector<double> fractions;  // of converged starts
  int unconverged = 0;
};

BasinReport basin_report(const DynamicSpec& spec, const PopulationGame& game,
                         int grid_resolution, IntegrateOptions opts = {});

}  // namespace sle
