#include "fsi/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsi {
namespace {

void validate(const AhuesParams& p) {
  if (!(std::isfinite(p.l0) && p.l0 >= 0.0)) {
    throw Error(ErrorCode::BadParameters, "l0 must be finite and >= 0");
  }
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
    throw Error(ErrorCode::BadParameters, "alpha must lie in (0, 1]");
  }
  if (!(p.delta >= 0.0 && p.delta < 1.0)) {
    throw Error(ErrorCode::BadParameters, "delta must lie in [0, 1)");
  }
  if (!(std::isfinite(p.eta) && p.eta > 0.0)) {
    throw Error(ErrorCode::BadParameters, "eta must be finite and > 0");
  }
}

}  // namespace

double ahues_function(const AhuesParams& p, double v) {
  return p.l0 * std::pow(v, 1.0 + p.alpha) - (1.0 - p.delta) * v + p.eta;
}

ConditionVerdict ahues_condition(const AhuesParams& p) {
  validate(p);
  const double rhs = std::pow(1.0 - p.delta, p.alpha + 1.0) *
                     std::pow(p.alpha / (1.0 + p.alpha), p.alpha) /
                     (1.0 + p.alpha);
  ConditionVerdict out;
  out.holds = p.l0 * std::pow(p.eta, p.alpha) <= rhs;
  out.eta_max = p.l0 == 0.0 ? std::numeric_limits<double>::infinity()
                            : std::pow(rhs / p.l0, 1.0 / p.alpha);
  return out;
}

ConditionVerdict ahues_condition(const HoelderParams& p) {
  return ahues_condition(ahues_params(p));
}

std::optional<RootPair> ahues_roots(const AhuesParams& p, double radius,
                                    double tol) {
  if (!ahues_condition(p).holds) return std::nullopt;
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "R must be finite and > 0");
  }
  const double argmin =
      p.l0 == 0.0
          ? radius
          : std::min(radius, std::pow((1.0 - p.delta) / (p.l0 * (1.0 + p.alpha)),
                                      1.0 / p.alpha));
  const auto roots =
      convex_roots([&p](double v) { return ahues_function(p, v); }, argmin,
                   radius, tol, p.eta);
  if (!roots.min_root) return std::nullopt;
  return RootPair{*roots.min_root, roots.max_root};
}

std::optional<RootPair> ahues_roots(const HoelderParams& p, double radius,
                                    double tol) {
  return ahues_roots(ahues_params(p), radius, tol);
}

bool kantorovich_condition(double l0, double eta) {
  return 2.0 * l0 * eta <= 1.0;
}

ConditionVerdict new_condition(const HoelderParams& p) {
  return {check_holder_condition(p), holder_eta_max(p.measure())};
}

ConditionReport compare_report(const HoelderParams& p, double radius,
                               double tol, std::optional<double> delta) {
  validate(p);
  const MajorantModel model(p.eta, radius, OmegaMeasure::hoelder(p.measure()));
  AhuesParams rival = ahues_params(p);
  if (delta) rival.delta = *delta;

  ConditionReport r{
      .params = p,
      .radius = radius,
      .delta = rival.delta,
      .new_condition = new_condition(p),
      .ahues = ahues_condition(rival),
      .kantorovich = std::nullopt,
      .certificate = certify(model, tol),
      .ahues_roots = ahues_roots(rival, radius, tol),
  };
  if (p.alpha == 1.0 && p.nu == 0.0) {
    r.kantorovich = kantorovich_condition(p.l0, p.eta);
  }
  r.eta_max_ratio = p.l0 > 0.0 ? r.new_condition.eta_max / r.ahues.eta_max
                               : std::numeric_limits<double>::quiet_NaN();

  const auto& c = r.certificate;
  const double slack = 10.0 * tol * std::max(1.0, radius);
  if (c.certified() && r.ahues_roots) {
    const double r_star = r.ahues_roots->min_root;
    r.ahues_ball_inside = r_star <= *c.lambda_star + slack;
    if (c.nu_star_star && r.ahues_roots->max_root) {
      r.roots_nested = *c.nu_star <= r_star + slack &&
                       *r.ahues_roots->max_root <= *c.nu_star_star + slack;
    }
    if (r_star < *c.nu_star) {
      r.observed_ordering = "r_star < nu_star";
    } else if (r_star == *c.nu_star) {
      r.observed_ordering = "r_star = nu_star";
    } else {
      r.observed_ordering = "nu_star < r_star";
    }
  }
  r.reference_ordering = "r_star < nu_star";
  return r;
}

}  // namespace fsi
