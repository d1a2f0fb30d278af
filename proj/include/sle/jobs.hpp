#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sle/config.hpp"

namespace sle {

std::vector<std::string> job_names();

// Runs one experiment job, emitting data tables plus a manifest.json into
// out_dir. Identical config + seed produce byte-identical outputs. On any
// error the partial outputs are removed and the exception propagates.
std::vector<std::filesystem::path> run_job(const std::string& job,
                                           const Config& cfg,
                                           const std::filesystem::path& out_dir,
                                           std::uint64_t seed);

}  // namespace sle
