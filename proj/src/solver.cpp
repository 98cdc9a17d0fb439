#include "fsi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fsi {
namespace {

constexpr double kProbeShrink = 1e-6;

Vector evaluate_residual(const Problem& p, const Vector& x) {
  Vector fx;
  try {
    fx = p.residual(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::EvaluationFailed, e.what());
  }
  if (fx.size() != p.dim()) {
    throw Error(ErrorCode::EvaluationFailed, "residual has the wrong size");
  }
  if (!fx.allFinite()) {
    throw Error(ErrorCode::EvaluationFailed, "residual is not finite");
  }
  return fx;
}

Matrix evaluate_jacobian(const Problem& p, const Vector& x) {
  Matrix j;
  try {
    j = p.jacobian(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::EvaluationFailed, e.what());
  }
  if (j.rows() != p.dim() || j.cols() != p.dim() || !j.allFinite()) {
    throw Error(ErrorCode::EvaluationFailed, "jacobian is malformed");
  }
  return j;
}

// Rounding allowance for the ball-membership test.
double ball_slack(const Problem& p, double limit) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         std::max(1.0, vector_norm(p.x0, p.norm) + limit);
}

SolveResult iterate(const Problem& p, const Vector& start, double limit,
                    const StopCriteria& stop,
                    const ConvergenceCertificate* certificate) {
  if (!(stop.tol_step > 0.0) || !(stop.tol_residual > 0.0) ||
      stop.max_iter <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "stopping tolerances and max_iter must be positive");
  }
  const double slack = ball_slack(p, limit);
  if (!(vector_norm(start - p.x0, p.norm) <= limit + slack)) {
    throw Error(ErrorCode::RadiusOutOfRange, "start lies outside the ball");
  }

  SolveResult out;
  IterationTrace& t = out.trace;
  t.norm = p.norm;

  // Majorizing sequence state when a certificate is attached.
  double v = 0.0;
  double nu_star = 0.0;
  if (certificate) {
    nu_star = *certificate->nu_star;
    t.error_bounds.push_back(nu_star - v);
  }

  Vector x = start;
  Vector fx = evaluate_residual(p, x);
  t.iterates.push_back(x);
  t.residual_norms.push_back(vector_norm(fx, p.norm));
  if (t.residual_norms.back() <= stop.tol_residual) {
    t.stop_reason = StopReason::ResidualTol;
    out.solution = x;
    return out;
  }

  t.stop_reason = StopReason::MaxIter;
  for (int k = 0; k < stop.max_iter; ++k) {
    Vector next = x - p.slope * fx;
    if (!(vector_norm(next - p.x0, p.norm) <= limit + slack)) {
      t.stop_reason = StopReason::LeftBall;
      break;
    }
    const double step = vector_norm(next - x, p.norm);
    t.step_norms.push_back(step);
    if (certificate) {
      const auto& model = certificate->model;
      const double v_next =
          std::max(v, majorant(model, std::min(v, model.radius())));
      t.scalar_steps.push_back(v_next - v);
      t.bound_slacks.push_back((v_next - v) - step);
      v = v_next;
      t.error_bounds.push_back(nu_star - v);
    }
    x = std::move(next);
    fx = evaluate_residual(p, x);
    t.iterates.push_back(x);
    t.residual_norms.push_back(vector_norm(fx, p.norm));
    if (t.residual_norms.back() <= stop.tol_residual) {
      t.stop_reason = StopReason::ResidualTol;
      break;
    }
    if (step <= stop.tol_step) {
      t.stop_reason = StopReason::StepTol;
      break;
    }
  }
  out.solution = x;
  return out;
}

// Points on the unit sphere of `norm` that are cheap to enumerate and are
// extreme points of the unit ball (or at least lie on its boundary).
std::vector<Vector> fixed_directions(Eigen::Index n, Norm norm) {
  std::vector<Vector> dirs;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(n);
      e[k] = s;
      dirs.push_back(std::move(e));
    }
  }
  if (norm == Norm::Max && n >= 2 && n <= 10) {
    const unsigned count = 1u << static_cast<unsigned>(n);
    for (unsigned mask = 0; mask < count; ++mask) {
      Vector d(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        d[k] = (mask >> static_cast<unsigned>(k)) & 1u ? 1.0 : -1.0;
      }
      dirs.push_back(std::move(d));
    }
  }
  return dirs;
}

Vector random_direction(Eigen::Index n, Norm norm, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector d(n);
  double len = 0.0;
  do {
    for (Eigen::Index k = 0; k < n; ++k) d[k] = normal(gen);
    len = vector_norm(d, norm);
  } while (len == 0.0);
  return d / len;
}

// Uniform sample from the ball of radius r in `norm`.
Vector uniform_in_ball(Eigen::Index n, Norm norm, double r,
                       std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector d(n);
  if (norm == Norm::Max) {
    for (Eigen::Index k = 0; k < n; ++k) d[k] = r * (2.0 * unit(gen) - 1.0);
    return d;
  }
  if (norm == Norm::One) {
    // Laplace coordinates normalised in the 1-norm are uniform on its sphere.
    std::exponential_distribution<double> expo(1.0);
    double len = 0.0;
    do {
      for (Eigen::Index k = 0; k < n; ++k) {
        d[k] = (unit(gen) < 0.5 ? -1.0 : 1.0) * expo(gen);
      }
      len = vector_norm(d, norm);
    } while (len == 0.0);
    d /= len;
  } else {
    d = random_direction(n, Norm::Two, gen);
  }
  const double scale = r * std::pow(unit(gen), 1.0 / static_cast<double>(n));
  return d * scale;
}

}  // namespace

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::StepTol: return "StepTol";
    case StopReason::ResidualTol: return "ResidualTol";
    case StopReason::MaxIter: return "MaxIter";
    case StopReason::LeftBall: return "LeftBall";
  }
  return "MaxIter";
}

void validate(const Problem& p) {
  const auto n = p.dim();
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "x0 is empty");
  if (!p.residual) {
    throw Error(ErrorCode::InvalidArgument, "residual is not set");
  }
  if (p.slope.rows() != n || p.slope.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "slope must be n x n");
  }
  if (!p.slope.allFinite() || !p.x0.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "slope and x0 must be finite");
  }
  if (!(std::isfinite(p.radius) && p.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "R must be finite and > 0");
  }
}

double initial_step_bound(const Problem& p) {
  validate(p);
  return vector_norm(p.slope * evaluate_residual(p, p.x0), p.norm);
}

Vector fsi_step(const Problem& p, const Vector& x) {
  validate(p);
  if (x.size() != p.dim()) {
    throw Error(ErrorCode::InvalidArgument, "x has the wrong size");
  }
  if (!(vector_norm(x - p.x0, p.norm) <= p.radius + ball_slack(p, p.radius))) {
    throw Error(ErrorCode::RadiusOutOfRange, "x lies outside the ball");
  }
  return x - p.slope * evaluate_residual(p, x);
}

SolveResult fsi_solve(const Problem& p, const StopCriteria& stop,
                      const ConvergenceCertificate* certificate) {
  validate(p);
  double limit = p.radius;
  if (certificate) {
    if (!certificate->certified()) {
      throw Error(ErrorCode::CertificateMissing,
                  "attached certificate is not Certified");
    }
    limit = std::min(limit, *certificate->nu_star);
  }
  return iterate(p, p.x0, limit, stop, certificate);
}

SolveResult fsi_solve_from(const Problem& p, const Vector& start,
                           const StopCriteria& stop) {
  validate(p);
  if (start.size() != p.dim()) {
    throw Error(ErrorCode::InvalidArgument, "start has the wrong size");
  }
  return iterate(p, start, p.radius, stop, nullptr);
}

MajorizationReport verify_majorization(const IterationTrace& trace,
                                       const MajorantModel& model,
                                       double slack_tol, double root_tol) {
  const auto nu_star = minimal_root(model, root_tol);
  if (!nu_star) {
    throw Error(ErrorCode::CertificateMissing,
                "model admits no minimal root; nothing to verify against");
  }
  const auto steps = trace.step_norms.size();
  if (steps == 0 || trace.iterates.size() != steps + 1) {
    throw Error(ErrorCode::InvalidArgument, "trace needs at least one step");
  }
  const auto v = scalar_sequence_prefix(model, static_cast<int>(steps) + 1);

  MajorizationReport report;
  report.tail_checked = trace.converged();
  report.worst_slack = std::numeric_limits<double>::infinity();
  const Vector& last = trace.iterates.back();
  for (std::size_t k = 0; k < steps; ++k) {
    MajorizationCheck c;
    c.k = static_cast<int>(k);
    c.step_norm = trace.step_norms[k];
    c.scalar_step = v[k + 1] - v[k];
    c.step_slack = c.scalar_step - c.step_norm;
    report.worst_slack = std::min(report.worst_slack, c.step_slack);
    if (report.tail_checked) {
      c.tail_norm = vector_norm(last - trace.iterates[k], trace.norm);
      c.tail_bound = *nu_star - v[k];
      c.tail_slack = *c.tail_bound - *c.tail_norm;
      report.worst_slack = std::min(report.worst_slack, *c.tail_slack);
    }
    report.checks.push_back(c);
  }
  report.passed = report.worst_slack >= -slack_tol;
  return report;
}

OmegaMeasure estimate_omega(const Problem& p, EstimateMode mode,
                            std::span<const double> radii,
                            int samples_per_radius, std::uint64_t seed) {
  validate(p);
  if (!p.jacobian) {
    throw Error(ErrorCode::JacobianMissing, "estimate_omega needs a jacobian");
  }
  if (radii.empty() || samples_per_radius <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least one radius and one sample per radius");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] > p.radius ||
        (i > 0 && radii[i] <= radii[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "radii must be positive, strictly increasing and <= R");
    }
  }

  const auto n = p.dim();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix j0 = evaluate_jacobian(p, p.x0);
  auto deviation = [&](const Vector& x) {
    const Matrix j = evaluate_jacobian(p, x);
    const Matrix m = mode == EstimateMode::Direct
                         ? Matrix(p.slope * j - identity)
                         : Matrix(p.slope * (j - j0));
    return induced_norm(m, p.norm);
  };

  std::vector<Knot> knots;
  knots.reserve(radii.size() + 1);
  const double base =
      mode == EstimateMode::Direct ? induced_norm(p.slope * j0 - identity, p.norm)
                                   : 0.0;
  if (mode == EstimateMode::Direct && base >= 1.0) {
    throw Error(ErrorCode::NuNotContractive,
                "||B F'(x0) - I|| >= 1 at the start point");
  }
  knots.push_back({0.0, base});

  const auto fixed = fixed_directions(n, p.norm);
  std::mt19937_64 gen(seed);
  double running = base;
  for (double v : radii) {
    double worst = 0.0;
    for (const Vector& d : fixed) worst = std::max(worst, deviation(p.x0 + v * d));
    if (n >= 2) {
      for (int s = 0; s < samples_per_radius; ++s) {
        worst = std::max(worst,
                         deviation(p.x0 + v * random_direction(n, p.norm, gen)));
      }
    }
    running = std::max(running, worst);
    knots.push_back({v, running});
  }
  return OmegaMeasure::tabulated(std::move(knots));
}

MajorantModel estimated_model(const Problem& p, EstimateMode mode,
                              std::span<const double> radii,
                              int samples_per_radius, std::uint64_t seed) {
  OmegaMeasure omega =
      estimate_omega(p, mode, radii, samples_per_radius, seed);
  if (mode == EstimateMode::Centered) {
    const Matrix start = p.slope * p.jacobian(p.x0) -
                         Matrix::Identity(p.dim(), p.dim());
    const double nu = induced_norm(start, p.norm);
    std::vector<Knot> shifted(omega.knots().begin(), omega.knots().end());
    for (Knot& k : shifted) k.value += nu;
    omega = OmegaMeasure::tabulated(std::move(shifted));
  }
  return MajorantModel(initial_step_bound(p), radii.back(), std::move(omega));
}

ProbeReport uniqueness_probe(const Problem& p,
                             const ConvergenceCertificate& certificate,
                             int num_starts, std::uint64_t seed, double tol,
                             const StopCriteria& stop) {
  validate(p);
  if (!certificate.certified()) {
    throw Error(ErrorCode::NotCertified, "uniqueness probe needs a certificate");
  }
  if (num_starts <= 0 || !(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "num_starts and tol must be positive");
  }
  const double lambda = *certificate.lambda_star;
  if (lambda > p.radius) {
    throw Error(ErrorCode::InvalidArgument, "lambda* exceeds the problem R");
  }
  const double r = lambda * (1.0 - kProbeShrink);

  std::mt19937_64 gen(seed);
  ProbeReport report;
  for (int i = 0; i < num_starts; ++i) {
    ProbeStart s;
    s.start = i == 0 ? p.x0 : Vector(p.x0 + uniform_in_ball(p.dim(), p.norm, r, gen));
    try {
      auto result = fsi_solve_from(p, s.start, stop);
      s.stop_reason = result.trace.stop_reason;
      s.iterations = static_cast<int>(result.trace.step_norms.size());
      if (result.trace.converged()) s.limit = std::move(result.solution);
    } catch (const Error& e) {
      s.error = e.what();
    }
    report.starts.push_back(std::move(s));
  }

  bool all_converged = true;
  double spread = 0.0;
  for (std::size_t a = 0; a < report.starts.size(); ++a) {
    const auto& la = report.starts[a].limit;
    if (!la) {
      all_converged = false;
      continue;
    }
    for (std::size_t b = a + 1; b < report.starts.size(); ++b) {
      const auto& lb = report.starts[b].limit;
      if (lb) spread = std::max(spread, vector_norm(*la - *lb, p.norm));
    }
  }
  report.max_pairwise_distance = spread;
  report.passed = all_converged && spread <= tol;
  return report;
}

}  // namespace fsi
