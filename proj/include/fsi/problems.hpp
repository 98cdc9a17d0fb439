#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsi/solver.hpp"

namespace fsi {

// Named fixture plus overrides.  Every parameter is a list of numbers; scalar
// parameters take exactly one entry and matrices are row-major.
struct FixtureSpec {
  std::string name;
  std::map<std::string, std::vector<double>> params;
  std::optional<double> radius;
  std::optional<Norm> norm;
};

/// Closed-form constants of a fixture in its configured norm.  (l0, alpha, nu)
/// is a valid Hoelder bound for omega_B; exact_omega, when set, is omega_B
/// itself and is what the estimator should reproduce.
struct AnalyticConstants {
  double l0 = 0.0;
  double alpha = 1.0;
  double nu = 0.0;
  double eta = 0.0;
  std::function<double(double)> exact_omega;

  [[nodiscard]] HoelderMeasure measure() const { return {l0, alpha, nu}; }
};

struct Fixture {
  std::string name;
  Problem problem;
  std::optional<AnalyticConstants> analytic;
  std::optional<Vector> known_solution;
};

struct ParamInfo {
  std::string name;
  std::string default_value;
  std::string description;
};

struct FixtureInfo {
  std::string name;
  std::string summary;
  std::vector<ParamInfo> params;
  double default_radius = 1.0;
  Norm default_norm = Norm::Max;
};

const std::vector<FixtureInfo>& fixture_catalog();

// Throws UnknownFixture or BadParameters.
Fixture build_fixture(const FixtureSpec& spec);

}  // namespace fsi
