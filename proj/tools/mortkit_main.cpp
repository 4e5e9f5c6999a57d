#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mortkit/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, mortkit::RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "Abridged q table (CSV)");
  cmd->add_option("--params", cfg.params,
                  "Parameter file (age,alpha,beta block plus period,k block)");
  cmd->add_option("--sex", cfg.sex, "Population label used in output names")
      ->check(CLI::IsMember({"male", "female"}));
  cmd->add_option("--horizon", cfg.horizon, "Forecast steps (5-year periods)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--confidence", cfg.confidence, "Two-sided confidence level")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--a0", cfg.infant_separation,
                  "Separation factor for the age-0 band");
  cmd->add_option("--out", cfg.out_dir, "Output directory (default: MORTKIT_OUT or .)");
  std::map<std::string, mortkit::OutputFormat> formats{
      {"csv", mortkit::OutputFormat::kCsv}, {"json", mortkit::OutputFormat::kJson}};
  cmd->add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mortality modeling toolkit: abridged life tables, "
               "log-bilinear mortality fits and index forecasts"};
  app.require_subcommand(1);
  app.set_config("--config");

  mortkit::RunConfig cfg;
  if (const char* env_out = std::getenv("MORTKIT_OUT"); env_out && *env_out) {
    cfg.out_dir = env_out;
  }

  CLI::App* validate = app.add_subcommand("validate", "Check an input table");
  CLI::App* fit = app.add_subcommand("fit", "Estimate model parameters");
  CLI::App* forecast = app.add_subcommand(
      "forecast", "Forecast the index and project rates and life expectancy");
  CLI::App* lifetable = app.add_subcommand("lifetable", "Build period life tables");
  CLI::App* report = app.add_subcommand("report", "Combined evaluation report");
  for (CLI::App* cmd : {validate, fit, forecast, lifetable, report}) {
    add_common_options(cmd, cfg);
  }
  lifetable->add_option("--period", cfg.period, "Restrict to one period label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return mortkit::run_command(app.get_subcommands().front()->get_name(), cfg,
                              std::cout, std::cerr);
}
