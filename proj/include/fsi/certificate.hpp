#pragma once

#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "fsi/majorant.hpp"

namespace fsi {

inline constexpr int kSequencePreviewLength = 16;
// Relative band around eta_max inside which a Hoelder model is treated as
// the tangency case.
inline constexpr double kEtaMaxRelTol = 1e-9;

enum class CertificateStatus { Certified, NotCertified };

enum class NotCertifiedReason {
  None,
  NuTooLarge,
  ConstraintAFails,
  RadiusTooSmall,
};

std::string_view to_string(CertificateStatus s) noexcept;
std::string_view to_string(NotCertifiedReason r) noexcept;
std::string_view to_string(Boundary b) noexcept;

/// Existence and uniqueness claims for the fixed slope iteration started at
/// x0, derived from a majorant model.
///
/// When certified the iterates stay in the closed ball of radius nu_star and
/// converge to a solution that is unique in the ball of radius lambda_star
/// (closed or open per `boundary`).
struct ConvergenceCertificate {
  CertificateStatus status = CertificateStatus::NotCertified;
  NotCertifiedReason reason = NotCertifiedReason::None;
  double nu = 0.0;
  double eta = 0.0;
  double radius = 0.0;

  std::optional<double> nu_star;
  // Absent on a certified result means the maximal root lies beyond R.
  std::optional<double> nu_star_star;
  std::optional<double> gamma_star;
  std::optional<double> lambda_star;
  std::optional<Boundary> boundary;
  // RadiusTooSmall only: the radius the minimal root would need.
  std::optional<double> required_radius;

  std::vector<double> scalar_sequence;
  MajorantModel model;

  [[nodiscard]] bool certified() const noexcept {
    return status == CertificateStatus::Certified;
  }

  friend bool operator==(const ConvergenceCertificate&,
                         const ConvergenceCertificate&) = default;
};

struct HoelderParams {
  double l0 = 0.0;
  double alpha = 1.0;
  double nu = 0.0;
  double eta = 0.0;

  [[nodiscard]] HoelderMeasure measure() const { return {l0, alpha, nu}; }
};

// Throws BadParameters unless l0 >= 0, alpha in (0,1], nu in [0,1), eta > 0.
void validate(const HoelderParams& p);

ConvergenceCertificate certify(const MajorantModel& model,
                               double tol = kDefaultRootTol);

/// Largest eta admitted by the Hoelder-case condition
///   l0 eta^alpha <= (1 - nu)^(alpha+1) (alpha / (1 + alpha))^alpha.
/// Returns +infinity when l0 == 0 (every eta is admissible).
double holder_eta_max(const HoelderMeasure& m);

inline bool is_unbounded(double eta_max) noexcept {
  return eta_max == std::numeric_limits<double>::infinity();
}

// Inclusive form of the Hoelder-case condition above.
bool check_holder_condition(const HoelderParams& p);

struct HolderRoots {
  double nu_star = 0.0;
  // nullopt: the maximal root lies beyond R.
  std::optional<double> nu_star_star;
};

/// Minimal and maximal roots of
///   l0 v^(1+alpha) / (1+alpha) - (1 - nu) v + eta
/// on [0, R].  Closed form for alpha == 1, bisection otherwise.  Throws
/// ConditionFails when the condition is violated and RadiusOutOfRange when
/// the minimal root exceeds R.
HolderRoots holder_roots(const HoelderParams& p, double radius,
                         double tol = kDefaultRootTol);

}  // namespace fsi
