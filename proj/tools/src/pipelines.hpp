#pragma once

#include <filesystem>

#include "config.hpp"

namespace qpm::cli {

// Each subcommand loads what it needs from the config, writes its artifacts
// into out_dir, and leaves unknown-key detection to Config::finish().
void run_design(Config& config, const std::filesystem::path& out_dir);
void run_pmf(Config& config, const std::filesystem::path& out_dir);
void run_hom(Config& config, const std::filesystem::path& out_dir);
void run_beat(Config& config, const std::filesystem::path& out_dir);
void run_purity(Config& config, const std::filesystem::path& out_dir);
void run_yield(Config& config, const std::filesystem::path& out_dir);
void run_compare(Config& config, const std::filesystem::path& out_dir);

}  // namespace qpm::cli
