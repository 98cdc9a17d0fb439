#pragma once

#include <optional>
#include <string>

#include "fsi/certificate.hpp"

namespace fsi {

// Rival scalar condition built on
//   f(v) = l0 v^(1+alpha) - (1 - delta) v + eta,
// with delta measuring how far B^{-1} is from F'(x0).  delta = nu when
// B^{-1} is the operator whose distance nu measures.
struct AhuesParams {
  double l0 = 0.0;
  double alpha = 1.0;
  double delta = 0.0;
  double eta = 0.0;
};

inline AhuesParams ahues_params(const HoelderParams& p) {
  return {p.l0, p.alpha, p.nu, p.eta};
}

struct ConditionVerdict {
  bool holds = false;
  double eta_max = 0.0;  // +inf when l0 == 0
};

struct RootPair {
  double min_root = 0.0;
  // nullopt: beyond R
  std::optional<double> max_root;
};

double ahues_function(const AhuesParams& p, double v);

/// l0 eta^alpha <= (1-delta)^(alpha+1) (alpha/(1+alpha))^alpha / (1+alpha)
ConditionVerdict ahues_condition(const AhuesParams& p);
ConditionVerdict ahues_condition(const HoelderParams& p);

// Roots of f on [0, R]; nullopt when the condition fails or the minimal root
// lies beyond R.
std::optional<RootPair> ahues_roots(const AhuesParams& p, double radius,
                                    double tol = kDefaultRootTol);
std::optional<RootPair> ahues_roots(const HoelderParams& p, double radius,
                                    double tol = kDefaultRootTol);

// Centered Kantorovich condition 2 l0 eta <= 1 (Lipschitz, nu = 0).
bool kantorovich_condition(double l0, double eta);

ConditionVerdict new_condition(const HoelderParams& p);

struct ConditionReport {
  HoelderParams params;
  double radius = 0.0;
  double delta = 0.0;

  ConditionVerdict new_condition;
  ConditionVerdict ahues;
  // Only for alpha == 1 and nu == 0.
  std::optional<bool> kantorovich;

  ConvergenceCertificate certificate;
  std::optional<RootPair> ahues_roots;

  // eta_max(new) / eta_max(Ahues); NaN when l0 == 0.
  double eta_max_ratio = 0.0;

  // [r*, r**] inside [nu*, nu**]; set when all four roots exist in [0, R].
  std::optional<bool> roots_nested;
  // Ahues uniqueness radius r* <= lambda*; set when both exist.
  std::optional<bool> ahues_ball_inside;
  // "r_star < nu_star" as stated in the literature.
  std::string reference_ordering;
  // Computed ordering between r* and nu*; empty when either is missing.
  std::string observed_ordering;
};

// delta defaults to nu.
ConditionReport compare_report(const HoelderParams& p, double radius,
                               double tol = kDefaultRootTol,
                               std::optional<double> delta = std::nullopt);

}  // namespace fsi
