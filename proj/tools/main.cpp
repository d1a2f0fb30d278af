#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sle/jobs.hpp"
#include "sle/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"samplogit: sampling logit equilibria of population games"};
  app.set_version_flag("--version", sle::kLibraryVersion);
  app.require_subcommand(1);

  std::string job, config_path, out_dir;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run one experiment job");
  std::string names;
  for (const auto& n : sle::job_names()) names += (names.empty() ? "" : "|") + n;
  run->add_option("job", job, "job name (" + names + ")")->required();
  run->add_option("--config", config_path, "config file path")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "seed recorded in the manifest");

  CLI11_PARSE(app, argc, argv);

  try {
    const sle::Config cfg = sle::Config::parse_file(config_path);
    const auto files = sle::run_job(job, cfg, out_dir, seed);
    for (const auto& f : files) std::cout << f.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
