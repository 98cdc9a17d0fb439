#include "fsi/certificate.hpp"

#include <algorithm>
#include <cmath>

namespace fsi {

std::string_view to_string(CertificateStatus s) noexcept {
  return s == CertificateStatus::Certified ? "Certified" : "NotCertified";
}

std::string_view to_string(NotCertifiedReason r) noexcept {
  switch (r) {
    case NotCertifiedReason::None: return "None";
    case NotCertifiedReason::NuTooLarge: return "NuTooLarge";
    case NotCertifiedReason::ConstraintAFails: return "ConstraintAFails";
    case NotCertifiedReason::RadiusTooSmall: return "RadiusTooSmall";
  }
  return "None";
}

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::Closed ? "Closed" : "Open";
}

void validate(const HoelderParams& p) {
  if (!(std::isfinite(p.l0) && p.l0 >= 0.0)) {
    throw Error(ErrorCode::BadParameters, "l0 must be finite and >= 0");
  }
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
    throw Error(ErrorCode::BadParameters, "alpha must lie in (0, 1]");
  }
  if (!(p.nu >= 0.0 && p.nu < 1.0)) {
    throw Error(ErrorCode::BadParameters, "nu must lie in [0, 1)");
  }
  if (!(std::isfinite(p.eta) && p.eta > 0.0)) {
    throw Error(ErrorCode::BadParameters, "eta must be finite and > 0");
  }
}

namespace {

// Where the minimal root would sit if the Hoelder closed form were allowed to
// run past R.  nullopt when no radius would help.
std::optional<double> unconstrained_min_root(const MajorantModel& model,
                                             double tol) {
  const auto& h = model.omega().hoelder_params();
  const double extended =
      h.l0 == 0.0 ? 2.0 * model.eta() / (1.0 - h.nu)
                  : std::pow((1.0 - h.nu) / h.l0, 1.0 / h.alpha);
  if (extended <= model.radius()) return std::nullopt;
  const MajorantModel wide(model.eta(), extended, model.omega());
  return minimal_root(wide, tol);
}

}  // namespace

ConvergenceCertificate certify(const MajorantModel& model, double tol) {
  ConvergenceCertificate c{.nu = model.omega().nu(),
                           .eta = model.eta(),
                           .radius = model.radius(),
                           .model = model};
  if (c.nu >= 1.0) {
    c.reason = NotCertifiedReason::NuTooLarge;
    return c;
  }

  const ScalarRoots roots = scalar_roots(model, tol);
  c.gamma_star = roots.contraction_radius;
  if (model.omega().is_hoelder()) {
    const auto& h = model.omega().hoelder_params();
    const double eta_max = holder_eta_max(h);
    const bool interior =
        h.l0 > 0.0 &&
        std::pow((1.0 - h.nu) / h.l0, 1.0 / h.alpha) <= model.radius();
    if (interior && std::abs(model.eta() - eta_max) <= kEtaMaxRelTol * eta_max) {
      c.status = CertificateStatus::Certified;
      c.nu_star = c.gamma_star;
      c.nu_star_star = c.gamma_star;
      c.lambda_star = c.gamma_star;
      c.boundary = Boundary::Closed;
      c.scalar_sequence = scalar_sequence_prefix(model, kSequencePreviewLength);
      return c;
    }
  }
  if (!roots.min_root) {
    c.reason = NotCertifiedReason::ConstraintAFails;
    if (model.omega().is_hoelder()) {
      if (auto needed = unconstrained_min_root(model, tol)) {
        c.reason = NotCertifiedReason::RadiusTooSmall;
        c.required_radius = needed;
      }
    }
    return c;
  }

  c.status = CertificateStatus::Certified;
  c.nu_star = roots.min_root;
  c.nu_star_star = roots.max_root;
  c.lambda_star = roots.uniqueness.radius;
  c.boundary = roots.uniqueness.boundary;

  c.scalar_sequence = scalar_sequence_prefix(model, kSequencePreviewLength);
  return c;
}

double holder_eta_max(const HoelderMeasure& m) {
  if (!(m.nu >= 0.0 && m.nu < 1.0) || !(m.alpha > 0.0 && m.alpha <= 1.0) ||
      !(m.l0 >= 0.0)) {
    throw Error(ErrorCode::BadParameters,
                "need l0 >= 0, alpha in (0,1], nu in [0,1)");
  }
  if (m.l0 == 0.0) return std::numeric_limits<double>::infinity();
  const double bound = std::pow(1.0 - m.nu, m.alpha + 1.0) *
                       std::pow(m.alpha / (1.0 + m.alpha), m.alpha);
  return std::pow(bound / m.l0, 1.0 / m.alpha);
}

bool check_holder_condition(const HoelderParams& p) {
  validate(p);
  const double lhs = p.l0 * std::pow(p.eta, p.alpha);
  const double rhs = std::pow(1.0 - p.nu, p.alpha + 1.0) *
                     std::pow(p.alpha / (1.0 + p.alpha), p.alpha);
  return lhs <= rhs;
}

HolderRoots holder_roots(const HoelderParams& p, double radius, double tol) {
  if (!check_holder_condition(p)) {
    throw Error(ErrorCode::ConditionFails,
                "Hoelder convergence condition is violated");
  }
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "R must be finite and > 0");
  }
  HolderRoots out;
  if (p.alpha == 1.0) {
    const double slope = 1.0 - p.nu;
    if (p.l0 == 0.0) {
      out.nu_star = p.eta / slope;
    } else {
      const double disc = std::max(0.0, slope * slope - 2.0 * p.l0 * p.eta);
      const double s = std::sqrt(disc);
      out.nu_star = 2.0 * p.eta / (slope + s);
      out.nu_star_star = (slope + s) / p.l0;
    }
    if (out.nu_star > radius) {
      throw Error(ErrorCode::RadiusOutOfRange, "minimal root exceeds R");
    }
    if (out.nu_star_star && *out.nu_star_star > radius) {
      out.nu_star_star.reset();
    }
    return out;
  }

  const MajorantModel model(p.eta, radius, OmegaMeasure::hoelder(p.measure()));
  const ScalarRoots roots = scalar_roots(model, tol);
  if (!roots.min_root) {
    throw Error(ErrorCode::RadiusOutOfRange, "minimal root exceeds R");
  }
  out.nu_star = *roots.min_root;
  out.nu_star_star = roots.max_root;
  return out;
}

}  // namespace fsi
