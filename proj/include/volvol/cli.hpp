#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "volvol/predictor.hpp"
#include "volvol/synth.hpp"

namespace volvol::cli {

enum class Command { ingest, distributions, fit, lmv, predict, synth, all };

std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
  std::optional<std::filesystem::path> input_dir;
  std::optional<SynthSpec> synth;  // exactly one of input_dir / synth for analysis commands
  std::filesystem::path output_dir = "out";
  std::size_t volume_bins = 30;   // linear on [-3, 3]
  double g_min = 0.1;
  double collapse_offset = 4.5;
  double extreme_fraction = 0.01;
  std::size_t max_lag = 16;
  QuintileMode quintile_mode = QuintileMode::per_stock;
  std::uint64_t seed = 7;
  double fit_v_lo = -2.0;
  double fit_v_hi = 2.0;
  std::size_t min_count = 100;
};

/// Flat `key = value` text; '#' starts a comment. Keys use underscores.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Builds a RunConfig from config-file entries overridden by flag values
/// (both keyed by underscore names). Throws ConfigError naming the field.
RunConfig make_config(Command command, const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& flag_values);

/// Runs one command and returns the process exit status: 0 success,
/// 2 I/O or configuration error, 3 analysis error.
int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: argument parsing, config merge and run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volvol::cli
