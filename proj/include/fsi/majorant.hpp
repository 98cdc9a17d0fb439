#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fsi/error.hpp"

namespace fsi {

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr int kBisectionCap = 200;

// omega_B(v) = nu + l0 * v^alpha
struct HoelderMeasure {
  double l0 = 0.0;
  double alpha = 1.0;
  double nu = 0.0;

  friend bool operator==(const HoelderMeasure&, const HoelderMeasure&) = default;
};

struct Knot {
  double radius = 0.0;
  double value = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Non-decreasing continuity measure omega_B, bounding ||B F'(x) - I|| as a
/// function of the distance ||x - x0||.
///
/// Either a Hoelder-type closed form or a piecewise-linear interpolant over
/// knots. Tabulated measures must start at radius 0 and may not be evaluated
/// past their last knot.
class OmegaMeasure {
 public:
  static OmegaMeasure hoelder(double l0, double alpha, double nu);
  static OmegaMeasure hoelder(const HoelderMeasure& params) {
    return hoelder(params.l0, params.alpha, params.nu);
  }
  static OmegaMeasure tabulated(std::vector<Knot> knots);

  [[nodiscard]] bool is_hoelder() const noexcept {
    return std::holds_alternative<HoelderMeasure>(rep_);
  }
  // Throws InvalidArgument for tabulated measures.
  [[nodiscard]] const HoelderMeasure& hoelder_params() const;
  // Empty for Hoelder measures.
  [[nodiscard]] std::span<const Knot> knots() const noexcept;

  // omega_B(0)
  [[nodiscard]] double nu() const noexcept;
  // Largest radius at which the measure is defined (+inf for Hoelder).
  [[nodiscard]] double max_radius() const noexcept;

  [[nodiscard]] double operator()(double v) const;
  // Exact integral of the measure over [0, v].
  [[nodiscard]] double integral(double v) const;

  friend bool operator==(const OmegaMeasure& a, const OmegaMeasure& b);

 private:
  struct Tabulated {
    std::vector<Knot> knots;
    std::vector<double> cumulative;  // integral up to each knot
  };

  explicit OmegaMeasure(HoelderMeasure h) : rep_(h) {}
  explicit OmegaMeasure(Tabulated t) : rep_(std::move(t)) {}

  std::variant<HoelderMeasure, Tabulated> rep_;
};

/// The bundle (eta, R, omega_B) defining the scalar majorant
///   phi(v) = eta + integral_0^v omega_B
/// on [0, R], and the gap g(v) = phi(v) - v.
class MajorantModel {
 public:
  MajorantModel(double eta, double radius, OmegaMeasure omega);

  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] const OmegaMeasure& omega() const noexcept { return omega_; }

  friend bool operator==(const MajorantModel&, const MajorantModel&) = default;

 private:
  double eta_;
  double radius_;
  OmegaMeasure omega_;
};

enum class Boundary { Closed, Open };

struct UniquenessRadius {
  double radius = 0.0;
  Boundary boundary = Boundary::Closed;
};

/// Every scalar quantity derived from a model, computed consistently.
/// max_root == nullopt with min_root present means the maximal root lies
/// beyond R (g(R) < 0).
struct ScalarRoots {
  std::optional<double> min_root;
  std::optional<double> max_root;
  double contraction_radius = 0.0;
  // Only meaningful when min_root is present.
  UniquenessRadius uniqueness;
};

// Evaluation; throws RadiusOutOfRange for v < 0 or past a tabulation.
double eval_omega(const OmegaMeasure& omega, double v);

// phi(v); throws RadiusOutOfRange outside [0, R].
double majorant(const MajorantModel& model, double v);

// g(v) = phi(v) - v
double majorant_gap(const MajorantModel& model, double v);

// sup { r in (0, R] : omega_B(r) < 1 }.  Throws NuNotContractive if
// omega_B(0) >= 1.
double contraction_radius(const MajorantModel& model);

// Minimal solution of v = phi(v) on [0, R]; nullopt iff phi(gamma) > gamma
// at the contraction radius gamma.
std::optional<double> minimal_root(const MajorantModel& model,
                                   double tol = kDefaultRootTol);

// Maximal root on [min_root, R]; nullopt when it lies beyond R.  Throws
// NotCertified if there is no minimal root.
std::optional<double> maximal_root(const MajorantModel& model,
                                   double tol = kDefaultRootTol);

// Radius of the uniqueness ball and whether the ball is closed or open.
// Throws NotCertified if there is no minimal root.
UniquenessRadius uniqueness_radius(const MajorantModel& model,
                                   double tol = kDefaultRootTol);

ScalarRoots scalar_roots(const MajorantModel& model,
                         double tol = kDefaultRootTol);

class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(const std::string& what, std::vector<double> partial)
      : Error(ErrorCode::MaxIterExceeded, what), partial_(std::move(partial)) {}
  [[nodiscard]] const std::vector<double>& partial() const noexcept {
    return partial_;
  }

 private:
  std::vector<double> partial_;
};

/// v_0 = 0, v_{k+1} = phi(v_k), truncated once an increment drops to tol.
/// Throws NotCertified without a minimal root and MaxIterExceeded (carrying
/// the terms computed so far) after max_iter increments.
std::vector<double> scalar_sequence(const MajorantModel& model, double tol,
                                    int max_iter);

// First `count` terms of the majorizing sequence, without a convergence test.
std::vector<double> scalar_sequence_prefix(const MajorantModel& model,
                                           int count);

// Roots of a convex function f on [0, radius] with f(0) > 0 and its minimum
// on [0, radius] at `argmin`.  Shared by the rival-condition comparisons.
struct ConvexRoots {
  std::optional<double> min_root;
  // nullopt with min_root present: the maximal root lies beyond `radius`.
  std::optional<double> max_root;
  // The minimum is zero to within tol * scale; both roots then sit at argmin.
  bool tangent = false;
};

ConvexRoots convex_roots(const std::function<double(double)>& f, double argmin,
                         double radius, double tol, double scale);

}  // namespace fsi
