#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sle/config.hpp"
#include "sle/jobs.hpp"

using namespace sle;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "samplogit_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const Config cfg = Config::parse(R"(
# leading comment
[alpha]
x = 1.5
x = 2.5        # repeated key overwrites
names = a b c
flag = true
list = 1 2 3

[beta]
empty_ok = 0
)");
  CHECK(cfg.get_double("alpha", "x") == 2.5);
  CHECK(cfg.get_string("alpha", "names") == "a b c");
  CHECK(cfg.get_bool("alpha", "flag", false));
  CHECK(cfg.get_ints("alpha", "list") == std::vector<int>{1, 2, 3});
  CHECK(cfg.get_int("beta", "empty_ok") == 0);
  CHECK(cfg.get_double("beta", "missing", 7.0) == 7.0);
  CHECK(!cfg.has("gamma", "x"));

  CHECK_THROWS_AS(cfg.get_string("alpha", "missing"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_int("alpha", "x"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("key_outside = 1"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("[broken\nx = 1"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("[s]\nnokey"), std::invalid_argument);

  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("unknown jobs are rejected") {
  const Config cfg = Config::parse("[game]\nkind = catalog\nname = young\n");
  CHECK_THROWS_WITH_AS(run_job("nope", cfg, fresh_dir("unknown"), 0),
                       doctest::Contains("unknown job"), std::invalid_argument);
  CHECK(job_names().size() == 7);
}

TEST_CASE("choice-curves job emits a table and a manifest") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = coordination
s = 2
t = 1

[choice-curves]
grid = 21
br_k = 3
br_eta = 0.5 0.25
logit_eta = 0.25
logit_k = 1 2
)");
  const fs::path out = fresh_dir("choice");
  const auto files = run_job("choice-curves", cfg, out, 42);
  REQUIRE(files.size() == 2);
  CHECK(fs::exists(out / "choice_curves.csv"));
  CHECK(fs::exists(out / "manifest.json"));

  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["job"] == "choice-curves");
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["module_versions"].contains("cli"));
  CHECK(manifest["parameters"]["game"]["name"] == "coordination");
  CHECK(manifest["outputs"][0]["rows"].get<int>() > 0);
  CHECK(manifest["config_hash"].get<std::string>().starts_with("fnv1a64:"));

  // table structure: '#' metadata block, then the header row
  std::istringstream table(slurp(out / "choice_curves.csv"));
  std::string line;
  int meta_lines = 0;
  while (std::getline(table, line) && line.starts_with("#")) ++meta_lines;
  CHECK(meta_lines >= 2);
  CHECK(line == "rule,k,eta,x1,p1");
}

TEST_CASE("identical config and seed produce byte-identical outputs") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = coordination
s = 2
t = 1

[error-audit]
eta = 0.5
k_ladder = 8 16 32
epsilon = 0.1
grid_resolution = 20
)");
  const fs::path out_a = fresh_dir("det_a");
  const fs::path out_b = fresh_dir("det_b");
  run_job("error-audit", cfg, out_a, 7);
  run_job("error-audit", cfg, out_b, 7);
  CHECK(slurp(out_a / "error_audit.csv") == slurp(out_b / "error_audit.csv"));
  CHECK(slurp(out_a / "manifest.json") == slurp(out_b / "manifest.json"));
}

TEST_CASE("failing jobs clean up partial outputs") {
  // x* = 1/2 violates the genericity margin, so interior-shift refuses
  const Config cfg = Config::parse(R"(
[game]
kind = linear
matrix = 1 0 ; 0 1

[interior-shift]
k = 100
eta = 0.1
)");
  const fs::path out = fresh_dir("cleanup");
  CHECK_THROWS_AS(run_job("interior-shift", cfg, out, 0), std::domain_error);
  CHECK(fs::is_empty(out));
}

TEST_CASE("interior-shift job emits predictions next to numeric values") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = coordination
s = 2
t = 1

[interior-shift]
k = 50 100
eta = 0.1
)");
  const fs::path out = fresh_dir("shift");
  run_job("interior-shift", cfg, out, 0);
  const std::string table = slurp(out / "interior_shift.csv");
  std::istringstream in(table);
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line ==
            "k,eta,x_star,beta,predicted_x1,numeric_x1,abs_error,sign_ok");
      continue;
    }
    CHECK(line.ends_with(",1"));  // sign_ok on every row
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("potential-profiles job emits profile and stationary tables") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = coordination
s = 2
t = 1

[potential-profiles]
k = 40
eta = 0.2
grid = 201
include_negation = true
)");
  const fs::path out = fresh_dir("potential");
  run_job("potential-profiles", cfg, out, 0);
  for (const char* name :
       {"potential.csv", "stationary.csv", "potential_negated.csv",
        "stationary_negated.csv", "manifest.json"}) {
    CHECK(fs::exists(out / name));
  }
  CHECK(slurp(out / "potential.csv").find("g_shape: quasiconcave-max-at-nash") !=
        std::string::npos);
  CHECK(slurp(out / "potential_negated.csv")
            .find("g_shape: quasiconvex-min-at-nash") != std::string::npos);
}

TEST_CASE("sle-vs-eta job emits curves with the documented columns") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = coordination
s = 2
t = 1

[sle-vs-eta]
k = 1 2
eta_max = 0.6
eta_min = 0.2
eta_points = 9
include_logit = true
)");
  const fs::path out = fresh_dir("curves");
  run_job("sle-vs-eta", cfg, out, 0);
  std::istringstream in(slurp(out / "sle_curves.csv"));
  std::string line;
  bool header_seen = false;
  int k1_rows = 0, logit_rows = 0;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line == "eta,k,x_1,x_2,residual,branch,solver");
      continue;
    }
    std::istringstream cells(line);
    std::string eta, k;
    std::getline(cells, eta, ',');
    std::getline(cells, k, ',');
    if (k == "1") ++k1_rows;
    if (k == "0") ++logit_rows;  // plain logit reference rows
  }
  CHECK(k1_rows == 9);
  CHECK(logit_rows >= 9);
}

TEST_CASE("phase-portrait job emits field, trajectory, and basin tables") {
  const Config cfg = Config::parse(R"(
[game]
kind = catalog
name = young

[phase-portrait]
rules = BRD SLD
k = 2
eta = 0.3
field_resolution = 10
basin_resolution = 6
trajectory_resolution = 4
)");
  const fs::path out = fresh_dir("portrait");
  run_job("phase-portrait", cfg, out, 0);
  for (const char* slug : {"brd", "sld"}) {
    for (const char* kind : {"field_", "trajectories_", "basins_", "attractors_"}) {
      CHECK(fs::exists(out / (std::string(kind) + slug + ".csv")));
    }
  }
  // the SLD attractor table carries a single attractor row
  std::istringstream in(slurp(out / "attractors_sld.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.starts_with("#") && !line.starts_with("attractor")) ++rows;
  }
  CHECK(rows == 1);
}

TEST_CASE("the installed binary runs a job end to end") {
  const fs::path out = fresh_dir("subprocess");
  const fs::path cfg_path = out / "cfg.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[game]\nkind = catalog\nname = coordination\ns = 2\nt = 1\n\n"
           "[error-audit]\neta = 0.5\nk_ladder = 8 16 32\nepsilon = 0.1\n"
           "grid_resolution = 10\n";
  }
  const std::string cmd = std::string(SAMPLOGIT_CLI_PATH) +
                          " run error-audit --config " + cfg_path.string() +
                          " --out " + (out / "result").string() +
                          " --seed 3 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "result" / "error_audit.csv"));
  CHECK(fs::exists(out / "result" / "manifest.json"));

  const std::string bad = std::string(SAMPLOGIT_CLI_PATH) +
                          " run nope --config " + cfg_path.string() +
                          " --out " + (out / "bad").string() + " > /dev/null 2>&1";
  CHECK(std::system(bad.c_str()) != 0);
}
