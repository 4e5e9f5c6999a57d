#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mortkit/age_grid.hpp"

namespace mortkit {

enum class OutputFormat { kCsv, kJson };

/// Resolved configuration for one pipeline run.
struct RunConfig {
  std::filesystem::path input;   // abridged q table (CSV); empty when absent
  std::filesystem::path params;  // parameter file; empty when absent
  std::string sex = "female";
  int horizon = 6;
  double confidence = 0.95;
  double infant_separation = kDefaultInfantSeparation;
  std::string period;            // lifetable: restrict to one period label
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::kCsv;
};

/// Dispatches one subcommand (validate, fit, forecast, lifetable, report),
/// writing progress to `out` and problems to `err`.
/// Returns the exit code: 0 success, 1 validation failure, 2 numeric
/// failure, 3 I/O failure.
int run_command(std::string_view command, const RunConfig& cfg,
                std::ostream& out, std::ostream& err);

}  // namespace mortkit
