#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sle/approx.hpp"
#include "sle/dynamics.hpp"
#include "sle/equilibrium.hpp"
#include "sle/potential.hpp"

using namespace sle;

namespace {

Vec state2(double x1) {
  Vec x(2);
  x << x1, 1.0 - x1;
  return x;
}

// all fixed points of the corrected rule, independent dense-scan bisection
std::vector<double> corrected_fps_oracle(const PopulationGame& g, int k,
                                         double eta) {
  auto f = [&](double y) { return corrected_rule(g, state2(y), k, eta)(0) - y; };
  std::vector<double> roots;
  const int res = 8000;
  double py = 0.0, pf = f(0.0);
  for (int i = 1; i <= res; ++i) {
    const double y = static_cast<double>(i) / res;
    const double fy = f(y);
    if ((pf > 0.0) != (fy > 0.0)) roots.push_back(oracles::bisect(f, py, y));
    py = y;
    pf = fy;
  }
  return roots;
}

}  // namespace

TEST_CASE("potential of a linear game reproduces the quadratic closed form") {
  const LinearGame g = make_coordination_2x2(2.0, 1.0);
  const double beta = 3.0, xs = 1.0 / 3.0;
  const auto prof = potential_profile(g, 40, 0.2, 501);

  // f(
  // x1) = (beta/2)(x1 - x*)^2 + constant, anchored at f(0) = 0
  for (int i = 0; i < prof.x1.size(); ++i) {
    const double want = 0.5 * beta * (prof.x1(i) - xs) * (prof.x1(i) - xs) -
                        0.5 * beta * xs * xs;
    CHECK(std::abs(prof.f(i) - want) < 1e-10);
  }
  // second differences recover beta
  const double h = prof.x1(1) - prof.x1(0);
  for (int i = 1; i + 1 < prof.x1.size(); i += 50) {
    const double dd = (prof.f(i + 1) - 2.0 * prof.f(i) + prof.f(i - 1)) / (h * h);
    CHECK(dd == doctest::Approx(beta).epsilon(1e-6));
  }

  // entropy term: maximum value eta log 2 at 1/2, zero at the corners
  CHECK(prof.h(0) == 0.0);
  CHECK(prof.h(prof.x1.size() - 1) == 0.0);
  CHECK(prof.h((prof.x1.size() - 1) / 2) ==
        doctest::Approx(0.2 * std::log(2.0)).epsilon(1e-12));
  REQUIRE(prof.stationary_h.size() == 1);
  CHECK(prof.stationary_h[0] == doctest::Approx(0.5).epsilon(1e-10));

  // interior stationary points of f alone sit at the interior Nash point
  REQUIRE(prof.stationary_f.size() == 1);
  CHECK(std::abs(prof.stationary_f[0] - xs) < 1e-8);
}

TEST_CASE("beta = 0 games have identically zero sampling perturbation") {
  Mat a(2, 2);
  a << 2.0, 1.0, 1.0, 0.0;  // rows differ by a constant: beta = 0
  const LinearGame g(a);
  const auto prof = potential_profile(g, 40, 0.2, 201);
  CHECK(prof.g.cwiseAbs().maxCoeff() < 1e-14);
  const auto shape = classify_g_shape(g, 40, 0.2, 201);
  CHECK(shape.shape == GShape::Zero);
}

TEST_CASE("stationary points of the perturbed potential are corrected-rule fixed points") {
  const LinearGame coord = make_coordination_2x2(2.0, 1.0);
  const LinearGame anti(-coord.matrix());
  struct Setting {
    const LinearGame* game;
    int k;
    double eta;
  };
  for (const auto& s : {Setting{&coord, 40, 0.2}, Setting{&anti, 40, 0.2},
                        Setting{&coord, 100, 0.3}, Setting{&anti, 100, 0.3}}) {
    const auto prof = potential_profile(*s.game, s.k, s.eta, 501);
    const auto stationary = stationary_points(prof);
    const auto fps = corrected_fps_oracle(*s.game, s.k, s.eta);
    REQUIRE(stationary.size() == fps.size());
    for (std::size_t i = 0; i < stationary.size(); ++i) {
      CHECK(std::abs(stationary[i] - fps[i]) < 1e-8);
      const Vec x = state2(stationary[i]);
      const Vec tl = corrected_rule(*s.game, x, s.k, s.eta);
      CHECK((tl - x).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("perturbed potential is a Lyapunov function for the approximated dynamic") {
  const LinearGame coord = make_coordination_2x2(2.0, 1.0);
  const LinearGame anti(-coord.matrix());
  for (const LinearGame* game : {&coord, &anti}) {
    const int k = 40;
    const double eta = 0.2;
    const auto prof = potential_profile(*game, k, eta, 201);
    SimplexMap rule = [game, k, eta](const Vec& x) {
      return corrected_rule(*game, x, k, eta);
    };
    for (double start : {0.12, 0.5, 0.88}) {
      IntegrateOptions opts;
      opts.dt = 0.01;
      const Trajectory traj =
          integrate_map(rule, StepperKind::RungeKutta4, state2(start), opts);
      REQUIRE(traj.flag == TerminalFlag::Converged);
      for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const double inc = potential_increment(prof, traj.states[i - 1](0),
                                               traj.states[i](0));
        CHECK(inc >= -1e-9);
      }
    }
  }
}

TEST_CASE("boundary slopes of g vanish") {
  const LinearGame g = make_coordination_2x2(2.0, 1.0);
  const auto prof = potential_profile(g, 40, 0.2, 201);
  CHECK(std::abs(prof.dg(0.0)) < 1e-8);
  CHECK(std::abs(prof.dg(1.0)) < 1e-8);
}

TEST_CASE("shape of g: quasiconcave for coordination, quasiconvex for its negation") {
  const LinearGame coord = make_coordination_2x2(2.0, 1.0);
  const auto up = classify_g_shape(coord, 40, 0.2, 501);
  CHECK(up.shape == GShape::QuasiconcaveMaxAtNash);
  CHECK(std::abs(up.extremum_x1 - 1.0 / 3.0) <= 1.0 / 500 + 1e-12);
  CHECK(up.witnesses.empty());

  const LinearGame anti(-coord.matrix());
  const auto down = classify_g_shape(anti, 40, 0.2, 501);
  CHECK(down.shape == GShape::QuasiconvexMinAtNash);
  CHECK(std::abs(down.extremum_x1 - 1.0 / 3.0) <= 1.0 / 500 + 1e-12);
}

TEST_CASE("entropy barrier keeps stationary points interior; large eta centers them") {
  const LinearGame g = make_coordination_2x2(2.0, 1.0);
  const auto prof = potential_profile(g, 40, 10.0, 201);
  const auto pts = stationary_points(prof);
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0] - 0.5) < 0.05);
  for (double p : pts) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }

  // anti-coordination: single stationary point at the shifted equilibrium
  const LinearGame anti(-g.matrix());
  const auto prof_anti = potential_profile(anti, 40, 0.2, 201);
  const auto pts_anti = stationary_points(prof_anti);
  const auto fps = corrected_fps_oracle(anti, 40, 0.2);
  REQUIRE(pts_anti.size() == 1);
  REQUIRE(fps.size() == 1);
  CHECK(std::abs(pts_anti[0] - fps[0]) < 1e-8);
}

TEST_CASE("profile preconditions") {
  const LinearGame g = make_coordination_2x2(2.0, 1.0);
  CHECK_THROWS_AS(potential_profile(g, 40, 0.2, 50), std::invalid_argument);
  CHECK_THROWS_AS(potential_profile(g, 0, 0.2, 201), std::invalid_argument);
  CHECK_THROWS_AS(potential_profile(make_young_game(), 40, 0.2, 201),
                  std::invalid_argument);

  // an invalid multiplier on the path is refused with the offending t
  CHECK_THROWS_AS(potential_profile(g, 1, 0.05, 201), std::domain_error);
}
