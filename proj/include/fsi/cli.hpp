#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsi/norms.hpp"

namespace fsi {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class Subcommand { Certify, Solve, Compare, EstimateOmega, ListProblems };

// Where the continuity measure comes from.  Auto uses the fixture's analytic
// constants when it has them and the Direct estimate otherwise.
enum class MeasureSource { Auto, Analytic, Direct, Centered };

struct Tolerances {
  double tol_step = 1e-12;
  double tol_residual = 1e-12;
  double root_tol = 1e-12;
  double slack_tol = 1e-9;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::ListProblems;
  // Fixture name followed by key=value overrides.  `compare` also accepts
  // bare l0/alpha/nu/eta/R/delta assignments.
  std::vector<std::string> problem_args;
  std::optional<std::string> problem_file;
  Tolerances tolerances;
  int max_iter = 10000;
  std::optional<Norm> norm;
  std::uint64_t seed = kDefaultSeed;
  // Uniqueness-probe starts for `solve`; 0 disables the probe.
  int num_starts = 100;
  MeasureSource measure = MeasureSource::Auto;
  // Estimator radii R/n, 2R/n, ..., R.
  int num_radii = 32;
  int samples = 64;

  std::optional<std::string> certificate_path;
  std::optional<std::string> trace_path;
  std::optional<std::string> report_path;
};

// Throws InvalidArgument for non-positive tolerances or counts.
void validate(const RunConfig& config);

/// Runs one subcommand.  Documents without an output path go to `out`;
/// diagnostics go to `err`.
///
/// Exit status: 0 success, 1 not certified (certify only), 2 invalid input,
/// 3 evaluation failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fsi
