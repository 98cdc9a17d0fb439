#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fsi/cli.hpp"

namespace {

void add_problem_options(CLI::App* cmd, fsi::RunConfig& config) {
  cmd->add_option("problem", config.problem_args,
                  "fixture name followed by key=value overrides");
  cmd->add_option("--problem-file", config.problem_file,
                  "problem spec document (fixture, params, norm, R)");
  cmd->add_option("--norm", config.norm, "max | one | two")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, fsi::Norm>{{"max", fsi::Norm::Max},
                                           {"inf", fsi::Norm::Max},
                                           {"one", fsi::Norm::One},
                                           {"1", fsi::Norm::One},
                                           {"two", fsi::Norm::Two},
                                           {"2", fsi::Norm::Two}}));
}

void add_measure_options(CLI::App* cmd, fsi::RunConfig& config) {
  cmd->add_option("--measure", config.measure,
                  "auto | analytic | direct | centered")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, fsi::MeasureSource>{
              {"auto", fsi::MeasureSource::Auto},
              {"analytic", fsi::MeasureSource::Analytic},
              {"direct", fsi::MeasureSource::Direct},
              {"centered", fsi::MeasureSource::Centered}}));
  cmd->add_option("--radii", config.num_radii,
                  "estimator radii, evenly spaced on [0, R]");
  cmd->add_option("--samples", config.samples,
                  "random directions per estimator radius");
  cmd->add_option("--seed", config.seed, "random seed");
  cmd->add_option("--root-tol", config.tolerances.root_tol,
                  "scalar root tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed slope iteration solver and convergence certifier"};
  app.require_subcommand(1);
  fsi::RunConfig config;

  auto* certify = app.add_subcommand("certify", "emit a convergence certificate");
  add_problem_options(certify, config);
  add_measure_options(certify, config);
  certify->add_option("--certificate", config.certificate_path,
                      "certificate output path");

  auto* solve = app.add_subcommand("solve", "run the iteration and check bounds");
  add_problem_options(solve, config);
  add_measure_options(solve, config);
  solve->add_option("--tol-step", config.tolerances.tol_step, "step tolerance");
  solve->add_option("--tol-residual", config.tolerances.tol_residual,
                    "residual tolerance");
  solve->add_option("--slack-tol", config.tolerances.slack_tol,
                    "majorization slack tolerance");
  solve->add_option("--max-iter", config.max_iter, "iteration cap");
  solve->add_option("--starts", config.num_starts,
                    "uniqueness probe starts, 0 disables");
  solve->add_option("--trace", config.trace_path, "trace CSV output path");
  solve->add_option("--report", config.report_path, "report output path");

  auto* compare = app.add_subcommand(
      "compare", "compare convergence conditions for Hoelder constants");
  add_problem_options(compare, config);
  compare->add_option("--root-tol", config.tolerances.root_tol,
                      "scalar root tolerance");
  compare->add_option("--report", config.report_path, "report output path");

  auto* estimate = app.add_subcommand(
      "estimate-omega", "tabulate the continuity measure of a fixture");
  add_problem_options(estimate, config);
  add_measure_options(estimate, config);
  estimate->add_option("--output", config.report_path, "CSV output path");

  auto* list = app.add_subcommand("list-problems", "print the fixture catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (certify->parsed()) config.subcommand = fsi::Subcommand::Certify;
  if (solve->parsed()) config.subcommand = fsi::Subcommand::Solve;
  if (compare->parsed()) config.subcommand = fsi::Subcommand::Compare;
  if (estimate->parsed()) config.subcommand = fsi::Subcommand::EstimateOmega;
  if (list->parsed()) config.subcommand = fsi::Subcommand::ListProblems;

  return fsi::run(config, std::cout, std::cerr);
}
