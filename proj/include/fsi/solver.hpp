#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsi/certificate.hpp"
#include "fsi/majorant.hpp"
#include "fsi/norms.hpp"

namespace fsi {

/// A finite-dimensional instance of F(x) = 0 together with the fixed slope B.
///
/// The slope is only ever applied to vectors; it is never factored or
/// inverted. `residual` and `jacobian` must be callable at every point of
/// the closed ball of radius `radius` around x0 and must be safe to call
/// concurrently.
struct Problem {
  std::function<Vector(const Vector&)> residual;
  // Optional; only the omega estimator needs it.
  std::function<Matrix(const Vector&)> jacobian;
  Matrix slope;
  Vector x0;
  double radius = 1.0;
  Norm norm = Norm::Max;

  [[nodiscard]] Eigen::Index dim() const noexcept { return x0.size(); }
};

// Throws InvalidArgument on inconsistent shapes or a non-positive radius.
void validate(const Problem& p);

struct StopCriteria {
  double tol_step = 1e-12;
  double tol_residual = 1e-12;
  int max_iter = 10000;
};

enum class StopReason { StepTol, ResidualTol, MaxIter, LeftBall };

std::string_view to_string(StopReason r) noexcept;

/// Iterates x_0..x_K with step norms ||x_{k+1} - x_k|| (K entries) and
/// residual norms ||F(x_k)|| (K+1 entries).  With a certificate attached the
/// scalar columns are filled as well: scalar_steps and bound_slacks per step,
/// error_bounds (nu* - v_k) per iterate.
struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<double> step_norms;
  std::vector<double> residual_norms;
  std::vector<double> scalar_steps;
  std::vector<double> bound_slacks;
  std::vector<double> error_bounds;
  StopReason stop_reason = StopReason::MaxIter;
  Norm norm = Norm::Max;

  [[nodiscard]] bool converged() const noexcept {
    return stop_reason == StopReason::StepTol ||
           stop_reason == StopReason::ResidualTol;
  }
  [[nodiscard]] bool has_certificate() const noexcept {
    return !error_bounds.empty();
  }
};

struct SolveResult {
  Vector solution;
  IterationTrace trace;
};

// ||B F(x0)||, the tightest admissible first-step bound.
double initial_step_bound(const Problem& p);

// x - B F(x): one residual evaluation, one matrix-vector product.
Vector fsi_step(const Problem& p, const Vector& x);

/// Fixed slope iteration from x0.  A certified certificate clamps the trust
/// region to min(R, nu*) and pairs every step with the majorizing sequence.
SolveResult fsi_solve(const Problem& p, const StopCriteria& stop = {},
                      const ConvergenceCertificate* certificate = nullptr);

// Same iteration from another start inside the ball of radius R around x0.
SolveResult fsi_solve_from(const Problem& p, const Vector& start,
                           const StopCriteria& stop = {});

struct MajorizationCheck {
  int k = 0;
  double step_norm = 0.0;
  double scalar_step = 0.0;
  double step_slack = 0.0;
  // Present when the trace converged.
  std::optional<double> tail_norm;
  std::optional<double> tail_bound;
  std::optional<double> tail_slack;
};

struct MajorizationReport {
  bool passed = true;
  double worst_slack = 0.0;
  bool tail_checked = false;
  std::vector<MajorizationCheck> checks;
};

/// Checks ||x_{k+1} - x_k|| <= v_{k+1} - v_k and, for converged traces,
/// ||x_K - x_k|| <= nu* - v_k, each up to slack_tol.  Failures are reported,
/// not thrown.  Throws CertificateMissing if the model has no minimal root.
MajorizationReport verify_majorization(const IterationTrace& trace,
                                       const MajorantModel& model,
                                       double slack_tol,
                                       double root_tol = kDefaultRootTol);

enum class EstimateMode { Direct, Centered };

/// Tabulated lower envelope of the continuity measure.
///
/// At each radius v the induced norm of B F'(x) - I (Direct) or
/// B (F'(x) - F'(x0)) (Centered) is maximised over sample points on the
/// sphere ||x - x0|| = v, then a running maximum across radii keeps the
/// result non-decreasing.  The samples are the extreme points of the unit
/// ball that are cheap to enumerate (+-e_k; all sign vectors for the max norm
/// up to n = 10) plus `samples_per_radius` seeded random directions.  For
/// n = 1 the sphere is exactly {x0 - v, x0 + v}.
OmegaMeasure estimate_omega(const Problem& p, EstimateMode mode,
                            std::span<const double> radii,
                            int samples_per_radius, std::uint64_t seed);

/// Majorant model from estimated measures with R = radii.back().  Centered
/// mode adds the Direct value at radius 0 (nu) to every centered knot.
MajorantModel estimated_model(const Problem& p, EstimateMode mode,
                              std::span<const double> radii,
                              int samples_per_radius, std::uint64_t seed);

struct ProbeStart {
  Vector start;
  std::optional<Vector> limit;
  StopReason stop_reason = StopReason::MaxIter;
  int iterations = 0;
  std::string error;
};

struct ProbeReport {
  std::vector<ProbeStart> starts;
  double max_pairwise_distance = 0.0;
  bool passed = false;
};

/// Runs the iteration from x0 and from num_starts - 1 further points drawn
/// uniformly from the open ball of radius lambda* (1 - 1e-6) around x0, and
/// checks that every run converges to the same limit within tol.
ProbeReport uniqueness_probe(const Problem& p,
                             const ConvergenceCertificate& certificate,
                             int num_starts, std::uint64_t seed, double tol,
                             const StopCriteria& stop = {});

}  // namespace fsi
