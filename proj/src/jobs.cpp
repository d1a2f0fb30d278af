#include "sle/jobs.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sle/approx.hpp"
#include "sle/dynamics.hpp"
#include "sle/equilibrium.hpp"
#include "sle/potential.hpp"
#include "sle/table.hpp"
#include "sle/version.hpp"

namespace sle {

namespace {

namespace fs = std::filesystem;

struct JobContext {
  std::string job;
  const Config* cfg = nullptr;
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::vector<std::pair<fs::path, std::size_t>> written;

  void emit(const std::string& filename, const Table& table) {
    const fs::path p = out_dir / filename;
    table.write(p);
    written.push_back({p, table.rows()});
  }

  std::vector<std::pair<std::string, std::string>> meta(
      std::initializer_list<std::pair<std::string, std::string>> extra) const {
    std::vector<std::pair<std::string, std::string>> m;
    m.push_back({"job", job});
    for (const auto& kv : extra) m.push_back(kv);
    return m;
  }
};

std::vector<double> geometric_grid(double hi, double lo, int points) {
  if (!(hi > lo) || !(lo > 0.0) || points < 2) {
    throw std::invalid_argument("geometric eta grid: need hi > lo > 0, points >= 2");
  }
  std::vector<double> g(points);
  const double ratio = std::log(lo / hi) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = hi * std::exp(ratio * i);
  g.front() = hi;
  g.back() = lo;
  return g;
}

std::vector<Vec> default_curve_seeds(int n) {
  std::vector<Vec> seeds;
  seeds.push_back(Vec::Constant(n, 1.0 / n));
  for (int i = 0; i < n; ++i) {
    seeds.push_back(PopulationState::near_vertex(n, i).weights());
  }
  return seeds;
}

void append_curves(Table& table, const std::vector<EquilibriumCurve>& curves,
                   int k_tag, int n) {
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.states.size(); ++i) {
      std::vector<std::string> row{Table::num(c.eta[i]), Table::num(k_tag)};
      for (int j = 0; j < n; ++j) row.push_back(Table::num(c.states[i](j)));
      row.push_back(Table::num(c.residuals[i]));
      row.push_back(Table::num(c.branch));
      row.push_back(c.solver);
      table.add_row(std::move(row));
    }
  }
}

// ---------------------------------------------------------------- jobs --

void job_choice_curves(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  if (game->actions() != 2) {
    throw std::invalid_argument("choice-curves: two-action game required");
  }
  const int grid = cfg.get_int("choice-curves", "grid", 401);
  const int br_k = cfg.get_int("choice-curves", "br_k", 5);
  const auto br_eta =
      cfg.get_doubles("choice-curves", "br_eta", {0.5, 0.25, 0.1, 0.05});
  const double logit_eta = cfg.get_double("choice-curves", "logit_eta", 0.25);
  const auto logit_k = cfg.get_ints("choice-curves", "logit_k", {1, 2, 5, 20});

  // rule: BR_k (eta = 0), L, or P (k = 0)
  Table table({"rule", "k", "eta", "x1", "p1"},
              ctx.meta({{"game", game->name()}}));
  auto xgrid = [&](int i) { return static_cast<double>(i) / (grid - 1); };

  SamplingBestResponseRule br(*game, br_k);
  for (int i = 0; i < grid; ++i) {
    Vec x(2);
    x << xgrid(i), 1.0 - xgrid(i);
    table.add_row({"BR_k", Table::num(br_k), Table::num(0.0),
                   Table::num(x(0)), Table::num(br(x)(0))});
  }
  for (double eta : br_eta) {
    SamplingLogitRule rule(*game, br_k, eta);
    for (int i = 0; i < grid; ++i) {
      Vec x(2);
      x << xgrid(i), 1.0 - xgrid(i);
      table.add_row({"L", Table::num(br_k), Table::num(eta), Table::num(x(0)),
                     Table::num(rule(x)(0))});
    }
  }
  {
    LogitRule p(*game, logit_eta);
    for (int i = 0; i < grid; ++i) {
      Vec x(2);
      x << xgrid(i), 1.0 - xgrid(i);
      table.add_row({"P", Table::num(0), Table::num(logit_eta), Table::num(x(0)),
                     Table::num(p(x)(0))});
    }
  }
  for (int k : logit_k) {
    SamplingLogitRule rule(*game, k, logit_eta);
    for (int i = 0; i < grid; ++i) {
      Vec x(2);
      x << xgrid(i), 1.0 - xgrid(i);
      table.add_row({"L", Table::num(k), Table::num(logit_eta), Table::num(x(0)),
                     Table::num(rule(x)(0))});
    }
  }
  ctx.emit("choice_curves.csv", table);
}

void job_sle_vs_eta(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  const int n = game->actions();
  const auto ks = cfg.get_ints("sle-vs-eta", "k", {1, 2, 3, 5, 20});
  const double eta_max = cfg.get_double("sle-vs-eta", "eta_max", 2.0);
  const double eta_min = cfg.get_double("sle-vs-eta", "eta_min", 0.02);
  const int points = cfg.get_int("sle-vs-eta", "eta_points", 121);
  const bool include_logit = cfg.get_bool("sle-vs-eta", "include_logit", true);
  const auto grid = geometric_grid(eta_max, eta_min, points);
  const auto seeds = default_curve_seeds(n);

  std::vector<std::string> cols{"eta", "k"};
  for (int j = 0; j < n; ++j) cols.push_back("x_" + std::to_string(j + 1));
  cols.insert(cols.end(), {"residual", "branch", "solver"});
  // k = 0 rows are the plain logit reference curves
  Table table(cols, ctx.meta({{"game", game->name()},
                              {"eta_grid", "geometric " + Table::num(eta_max) +
                                               ".." + Table::num(eta_min)}}));

  for (int k : ks) {
    // k = 1 and two-action k = 2 have exact constructions that stay
    // accurate at small eta, where the generic map degenerates toward the
    // identity in double precision
    if (k == 1 || (k == 2 && n == 2)) {
      for (double eta : grid) {
        const EquilibriumResult res = k == 1 ? solve_sle_k1(*game, eta)
                                             : solve_sle_k2_two_action(*game, eta);
        std::vector<std::string> row{Table::num(eta), Table::num(k)};
        for (int j = 0; j < n; ++j) row.push_back(Table::num(res.state(j)));
        row.push_back(Table::num(res.residual));
        row.push_back(Table::num(0));
        row.push_back(res.solver);
        table.add_row(std::move(row));
      }
      continue;
    }
    RuleFactory factory = [&game, k](double eta) -> SimplexMap {
      auto rule = std::make_shared<SamplingLogitRule>(*game, k, eta);
      return [rule](const Vec& x) { return (*rule)(x); };
    };
    append_curves(table, trace_equilibrium_curves(factory, n, grid, seeds), k, n);
  }
  if (include_logit) {
    append_curves(table, solve_logit_continuation(*game, grid, seeds), 0, n);
  }
  ctx.emit("sle_curves.csv", table);
}

std::string rule_slug(const DynamicSpec& spec) {
  switch (spec.kind) {
    case DynamicKind::BestResponse: return "brd";
    case DynamicKind::SamplingBestResponse: return "sbrd";
    case DynamicKind::Logit: return "ld";
    case DynamicKind::SamplingLogit: return "sld";
  }
  return "?";
}

void job_phase_portrait(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  const int n = game->actions();
  const std::string sec = "phase-portrait";
  const int k = cfg.get_int(sec, "k", 2);
  const double eta = cfg.get_double(sec, "eta", 0.3);
  const int field_res = cfg.get_int(sec, "field_resolution", 40);
  const int basin_res = cfg.get_int(sec, "basin_resolution", 15);
  const int traj_res = cfg.get_int(sec, "trajectory_resolution", 6);
  IntegrateOptions iopts;
  iopts.t_max = cfg.get_double(sec, "t_max", 200.0);
  iopts.conv_tol = cfg.get_double(sec, "conv_tol", 1e-9);

  std::vector<DynamicSpec> specs;
  std::istringstream names(cfg.get_string(sec, "rules", "BRD SBRD LD SLD"));
  std::string name;
  while (names >> name) {
    if (name == "BRD") specs.push_back(DynamicSpec::brd());
    else if (name == "SBRD") specs.push_back(DynamicSpec::sbrd(k));
    else if (name == "LD") specs.push_back(DynamicSpec::ld(eta));
    else if (name == "SLD") specs.push_back(DynamicSpec::sld(k, eta));
    else throw std::invalid_argument("phase-portrait: unknown rule '" + name + "'");
  }

  for (const auto& spec : specs) {
    const std::string slug = rule_slug(spec);
    const auto meta = ctx.meta({{"game", game->name()}, {"rule", spec.label()}});

    std::vector<std::string> fcols;
    for (int j = 0; j < n; ++j) fcols.push_back("x_" + std::to_string(j + 1));
    for (int j = 0; j < n; ++j) fcols.push_back("v_" + std::to_string(j + 1));
    fcols.push_back("speed");
    Table field(fcols, meta);
    const auto grid = vector_field(spec, *game, field_res);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      std::vector<std::string> row;
      for (int j = 0; j < n; ++j) row.push_back(Table::num(grid.points[i](j)));
      for (int j = 0; j < n; ++j) row.push_back(Table::num(grid.velocities[i](j)));
      row.push_back(Table::num(grid.speeds[i]));
      field.add_row(std::move(row));
    }
    ctx.emit("field_" + slug + ".csv", field);

    std::vector<std::string> tcols{"trajectory", "t"};
    for (int j = 0; j < n; ++j) tcols.push_back("x_" + std::to_string(j + 1));
    Table trajectories(tcols, meta);
    IntegrateOptions topts = iopts;
    topts.dt = cfg.get_double(sec, spec.smooth() ? "dt" : "dt_br",
                              spec.smooth() ? 0.01 : 0.005);
    const auto starts = interior_lattice(n, traj_res);
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 / topts.dt)));
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const Trajectory traj = integrate(spec, *game, starts[s], topts);
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        if (i % stride != 0 && i + 1 != traj.states.size()) continue;
        std::vector<std::string> row{Table::num(static_cast<int>(s)),
                                     Table::num(traj.times[i])};
        for (int j = 0; j < n; ++j) row.push_back(Table::num(traj.states[i](j)));
        trajectories.add_row(std::move(row));
      }
    }
    ctx.emit("trajectories_" + slug + ".csv", trajectories);

    IntegrateOptions bopts = topts;
    const BasinReport basins = basin_report(spec, *game, basin_res, bopts);
    std::vector<std::string> bcols;
    for (int j = 0; j < n; ++j) bcols.push_back("start_" + std::to_string(j + 1));
    bcols.push_back("attractor");
    Table basin_table(bcols, meta);
    for (std::size_t i = 0; i < basins.starts.size(); ++i) {
      std::vector<std::string> row;
      for (int j = 0; j < n; ++j) row.push_back(Table::num(basins.starts[i](j)));
      row.push_back(Table::num(basins.attractor_of[i]));
      basin_table.add_row(std::move(row));
    }
    ctx.emit("basins_" + slug + ".csv", basin_table);

    std::vector<std::string> acols{"attractor"};
    for (int j = 0; j < n; ++j) acols.push_back("x_" + std::to_string(j + 1));
    acols.push_back("fraction");
    auto ameta = meta;
    ameta.push_back({"unconverged", Table::num(basins.unconverged)});
    Table attractor_table(acols, ameta);
    for (std::size_t c = 0; c < basins.attractors.size(); ++c) {
      std::vector<std::string> row{Table::num(static_cast<int>(c))};
      for (int j = 0; j < n; ++j) row.push_back(Table::num(basins.attractors[c](j)));
      row.push_back(Table::num(basins.fractions[c]));
      attractor_table.add_row(std::move(row));
    }
    ctx.emit("attractors_" + slug + ".csv", attractor_table);
  }
}

void job_premium_profiles(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  if (game->actions() != 2) {
    throw std::invalid_argument("premium-profiles: two-action game required");
  }
  const std::string sec = "premium-profiles";
  const int k = cfg.get_int(sec, "k", 1);
  const auto etas = cfg.get_doubles(sec, "eta", {0.5, 0.25, 0.1, 0.05});
  const int grid = cfg.get_int(sec, "grid", 1001);

  Table table({"eta", "k", "x1", "v_1", "v_2", "q_1", "q_2", "v_hat_1", "v_hat_2",
               "q_hat_1", "q_hat_2", "multiplier_1", "multiplier_2", "G_1", "G_2",
               "sigma_hat_1", "sigma_hat_2", "combined_1", "combined_2", "valid"},
              ctx.meta({{"game", game->name()},
                        {"note", "sigma_hat = 2 k eta^2 v_hat; combined = "
                                 "2 k eta^2 (v_hat + q_hat)"}}));
  for (double eta : etas) {
    const double scale = 2.0 * k * eta * eta;
    for (int i = 0; i < grid; ++i) {
      const double x1 = static_cast<double>(i) / (grid - 1);
      Vec x(2);
      x << x1, 1.0 - x1;
      const PremiumReport rep = premiums(*game, x, k, eta);
      table.add_row({Table::num(eta), Table::num(k), Table::num(x1),
                     Table::num(rep.v(0)), Table::num(rep.v(1)),
                     Table::num(rep.q(0)), Table::num(rep.q(1)),
                     Table::num(rep.v_hat(0)), Table::num(rep.v_hat(1)),
                     Table::num(rep.q_hat(0)), Table::num(rep.q_hat(1)),
                     Table::num(rep.multiplier(0)), Table::num(rep.multiplier(1)),
                     Table::num(rep.distortion(0)), Table::num(rep.distortion(1)),
                     Table::num(scale * rep.v_hat(0)), Table::num(scale * rep.v_hat(1)),
                     Table::num(scale * (rep.v_hat(0) + rep.q_hat(0))),
                     Table::num(scale * (rep.v_hat(1) + rep.q_hat(1))),
                     Table::num(static_cast<int>(rep.valid))});
    }
  }
  ctx.emit("premiums.csv", table);
}

void job_error_audit(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  const std::string sec = "error-audit";
  const auto etas = cfg.get_doubles(sec, "eta", {0.5, 0.15});
  const auto ladder = cfg.get_ints(sec, "k_ladder", {16, 32, 64, 128, 256});
  const double epsilon = cfg.get_double(sec, "epsilon", 0.1);
  const int res = cfg.get_int(sec, "grid_resolution",
                              default_audit_resolution(game->actions()));

  Table table({"eta", "k", "sup_error", "slope"},
              ctx.meta({{"game", game->name()},
                        {"epsilon", Table::num(epsilon)},
                        {"grid_resolution", Table::num(res)}}));
  for (double eta : etas) {
    const auto rep = error_scaling_audit(*game, eta, ladder, epsilon, res);
    for (std::size_t i = 0; i < rep.k.size(); ++i) {
      table.add_row({Table::num(eta), Table::num(rep.k[i]),
                     Table::num(rep.sup_error[i]), Table::num(rep.slope)});
    }
  }
  ctx.emit("error_audit.csv", table);
}

// interior fixed point of the corrected rule closest to y_center
double corrected_fixed_point_near(const PopulationGame& game, int k, double eta,
                                  double y_center) {
  auto g = [&](double y) {
    Vec x(2);
    x << y, 1.0 - y;
    return corrected_rule(game, x, k, eta)(0) - y;
  };
  const int res = 4000;
  double best = -1.0, best_dist = 2.0;
  double prev_y = 0.0, prev_g = g(0.0);
  for (int i = 1; i <= res; ++i) {
    const double y = static_cast<double>(i) / res;
    const double gy = g(y);
    if ((prev_g > 0.0) != (gy > 0.0)) {
      double lo = prev_y, hi = y, glo = prev_g;
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (lo + hi);
        const double gm = g(m);
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = m;
          glo = gm;
        } else {
          hi = m;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (std::abs(root - y_center) < best_dist) {
        best_dist = std::abs(root - y_center);
        best = root;
      }
    }
    prev_y = y;
    prev_g = gy;
  }
  if (best < 0.0) {
    throw std::runtime_error("interior-shift: no fixed point of the corrected rule found");
  }
  return best;
}

void job_interior_shift(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  const auto* linear = dynamic_cast<const LinearGame*>(game.get());
  if (!linear || linear->actions() != 2) {
    throw std::invalid_argument("interior-shift: 2x2 linear game required");
  }
  const std::string sec = "interior-shift";
  const auto ks = cfg.get_ints(sec, "k", {100, 200, 400});
  const auto etas = cfg.get_doubles(sec, "eta", {0.1, 0.05});
  const double margin = cfg.get_double(sec, "margin", 0.05);

  Table table({"k", "eta", "x_star", "beta", "predicted_x1", "numeric_x1",
               "abs_error", "sign_ok"},
              ctx.meta({{"game", game->name()}}));
  for (int k : ks) {
    for (double eta : etas) {
      const auto pred = interior_shift_two_action(linear->matrix(), k, eta, margin);
      const double numeric =
          corrected_fixed_point_near(*game, k, eta, pred.nash_x1);
      const bool sign_ok =
          pred.predicts_decrease == (numeric < pred.nash_x1);
      table.add_row({Table::num(k), Table::num(eta), Table::num(pred.nash_x1),
                     Table::num(pred.beta), Table::num(pred.predicted_x1),
                     Table::num(numeric),
                     Table::num(std::abs(pred.predicted_x1 - numeric)),
                     Table::num(static_cast<int>(sign_ok))});
    }
  }
  ctx.emit("interior_shift.csv", table);
}

void job_potential_profiles(JobContext& ctx) {
  const Config& cfg = *ctx.cfg;
  auto game = game_from_config(cfg);
  if (game->actions() != 2) {
    throw std::invalid_argument("potential-profiles: two-action game required");
  }
  const std::string sec = "potential-profiles";
  const int k = cfg.get_int(sec, "k", 40);
  const double eta = cfg.get_double(sec, "eta", 0.2);
  const int grid = cfg.get_int(sec, "grid", 2001);
  const bool negation = cfg.get_bool(sec, "include_negation", true);

  auto emit_profile = [&](const PopulationGame& g, const std::string& suffix) {
    const PotentialProfile prof = potential_profile(g, k, eta, grid);
    auto meta = ctx.meta({{"game", g.name()},
                          {"k", Table::num(k)},
                          {"eta", Table::num(eta)}});
    if (const auto* lin = dynamic_cast<const LinearGame*>(&g)) {
      const auto shape = classify_g_shape(*lin, k, eta, grid);
      const char* tag = "inconclusive";
      switch (shape.shape) {
        case GShape::QuasiconcaveMaxAtNash: tag = "quasiconcave-max-at-nash"; break;
        case GShape::Zero: tag = "zero"; break;
        case GShape::QuasiconvexMinAtNash: tag = "quasiconvex-min-at-nash"; break;
        case GShape::Inconclusive: break;
      }
      meta.push_back({"g_shape", tag});
    }
    Table prof_table({"x1", "f", "h", "g", "f_eta", "f_k_eta"}, meta);
    for (int i = 0; i < prof.x1.size(); ++i) {
      prof_table.add_row({Table::num(prof.x1(i)), Table::num(prof.f(i)),
                          Table::num(prof.h(i)), Table::num(prof.g(i)),
                          Table::num(prof.f_eta(i)), Table::num(prof.f_k_eta(i))});
    }
    ctx.emit("potential" + suffix + ".csv", prof_table);

    Table st({"curve", "x1"}, meta);
    auto add = [&](const char* curve, const std::vector<double>& pts) {
      for (double p : pts) st.add_row({curve, Table::num(p)});
    };
    add("f", prof.stationary_f);
    add("h", prof.stationary_h);
    add("g", prof.stationary_g);
    add("f_eta", prof.stationary_f_eta);
    add("f_k_eta", prof.stationary_f_k_eta);
    ctx.emit("stationary" + suffix + ".csv", st);
  };

  emit_profile(*game, "");
  if (negation) {
    const auto* linear = dynamic_cast<const LinearGame*>(game.get());
    if (!linear) {
      throw std::invalid_argument(
          "potential-profiles: include_negation needs a linear game");
    }
    LinearGame negated(-linear->matrix(), "negated(" + linear->name() + ")");
    emit_profile(negated, "_negated");
  }
}

using JobFn = std::function<void(JobContext&)>;

const std::map<std::string, JobFn>& registry() {
  static const std::map<std::string, JobFn> jobs = {
      {"choice-curves", job_choice_curves},
      {"sle-vs-eta", job_sle_vs_eta},
      {"phase-portrait", job_phase_portrait},
      {"premium-profiles", job_premium_profiles},
      {"error-audit", job_error_audit},
      {"interior-shift", job_interior_shift},
      {"potential-profiles", job_potential_profiles},
  };
  return jobs;
}

void write_manifest(JobContext& ctx) {
  nlohmann::json m;
  m["job"] = ctx.job;
  m["library_version"] = kLibraryVersion;
  m["config_hash"] = "fnv1a64:" + [&] {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ctx.cfg->raw())));
    return std::string(buf);
  }();
  m["seed"] = ctx.seed;
  m["module_versions"] = module_versions();
  nlohmann::json params = nlohmann::json::object();
  for (const auto& sec : ctx.cfg->sections()) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& kv : sec.second) s[kv.first] = kv.second;
    params[sec.first] = s;
  }
  m["parameters"] = params;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [path, rows] : ctx.written) {
    outputs.push_back({{"file", path.filename().string()}, {"rows", rows}});
  }
  m["outputs"] = outputs;

  const fs::path p = ctx.out_dir / "manifest.json";
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << m.dump(2) << "\n";
  ctx.written.push_back({p, 0});
}

}  // namespace

std::vector<std::string> job_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<std::filesystem::path> run_job(const std::string& job,
                                           const Config& cfg,
                                           const std::filesystem::path& out_dir,
                                           std::uint64_t seed) {
  const auto it = registry().find(job);
  if (it == registry().end()) {
    std::string names;
    for (const auto& n : job_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown job '" + job + "'; known jobs: " + names);
  }
  std::filesystem::create_directories(out_dir);
  JobContext ctx;
  ctx.job = job;
  ctx.cfg = &cfg;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  try {
    it->second(ctx);
    write_manifest(ctx);
  } catch (...) {
    for (const auto& [path, rows] : ctx.written) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    throw;
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& [path, rows] : ctx.written) paths.push_back(path);
  return paths;
}

}  // namespace sle
