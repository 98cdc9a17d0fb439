#include "fsi/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsi {
namespace {

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Bisection between a point where f <= 0 and a point where f > 0.  Returns
// the final point on the f <= 0 side.
double bisect(const std::function<double(double)>& f, double nonpositive,
              double positive) {
  for (int i = 0; i < kBisectionCap; ++i) {
    const double mid = 0.5 * (nonpositive + positive);
    if (mid == nonpositive || mid == positive) break;
    if (f(mid) <= 0.0) {
      nonpositive = mid;
    } else {
      positive = mid;
    }
  }
  return nonpositive;
}

}  // namespace

OmegaMeasure OmegaMeasure::hoelder(double l0, double alpha, double nu) {
  if (!finite_nonnegative(l0)) {
    throw Error(ErrorCode::InvalidModel, "l0 must be finite and >= 0");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidModel, "alpha must lie in (0, 1]");
  }
  if (!finite_nonnegative(nu)) {
    throw Error(ErrorCode::InvalidModel, "nu must be finite and >= 0");
  }
  return OmegaMeasure(HoelderMeasure{l0, alpha, nu});
}

OmegaMeasure OmegaMeasure::tabulated(std::vector<Knot> knots) {
  if (knots.size() < 2) {
    throw Error(ErrorCode::InvalidModel, "tabulated measure needs >= 2 knots");
  }
  if (knots.front().radius != 0.0) {
    throw Error(ErrorCode::InvalidModel, "first knot must sit at radius 0");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!finite_nonnegative(knots[i].radius) ||
        !finite_nonnegative(knots[i].value)) {
      throw Error(ErrorCode::InvalidModel,
                  "knot radii and values must be finite and >= 0");
    }
    if (i > 0) {
      if (knots[i].radius <= knots[i - 1].radius) {
        throw Error(ErrorCode::InvalidModel,
                    "knot radii must be strictly increasing");
      }
      if (knots[i].value < knots[i - 1].value) {
        throw Error(ErrorCode::InvalidModel,
                    "knot values must be non-decreasing (at radius " +
                        describe(knots[i].radius) + ")");
      }
    }
  }
  Tabulated t;
  t.cumulative.resize(knots.size(), 0.0);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double h = knots[i].radius - knots[i - 1].radius;
    t.cumulative[i] =
        t.cumulative[i - 1] + 0.5 * h * (knots[i].value + knots[i - 1].value);
  }
  t.knots = std::move(knots);
  return OmegaMeasure(std::move(t));
}

const HoelderMeasure& OmegaMeasure::hoelder_params() const {
  if (const auto* h = std::get_if<HoelderMeasure>(&rep_)) return *h;
  throw Error(ErrorCode::InvalidArgument, "measure is tabulated");
}

std::span<const Knot> OmegaMeasure::knots() const noexcept {
  if (const auto* t = std::get_if<Tabulated>(&rep_)) return t->knots;
  return {};
}

double OmegaMeasure::nu() const noexcept {
  if (const auto* h = std::get_if<HoelderMeasure>(&rep_)) return h->nu;
  return std::get<Tabulated>(rep_).knots.front().value;
}

double OmegaMeasure::max_radius() const noexcept {
  if (is_hoelder()) return std::numeric_limits<double>::infinity();
  return std::get<Tabulated>(rep_).knots.back().radius;
}

double OmegaMeasure::operator()(double v) const {
  if (!(v >= 0.0) || v > max_radius()) {
    throw Error(ErrorCode::RadiusOutOfRange,
                "measure evaluated at " + describe(v));
  }
  if (const auto* h = std::get_if<HoelderMeasure>(&rep_)) {
    return h->nu + h->l0 * std::pow(v, h->alpha);
  }
  const auto& k = std::get<Tabulated>(rep_).knots;
  auto hi = std::upper_bound(k.begin(), k.end(), v,
                             [](double x, const Knot& n) { return x < n.radius; });
  if (hi == k.end()) return k.back().value;
  auto lo = std::prev(hi);
  const double t = (v - lo->radius) / (hi->radius - lo->radius);
  return lo->value + t * (hi->value - lo->value);
}

double OmegaMeasure::integral(double v) const {
  if (!(v >= 0.0) || v > max_radius()) {
    throw Error(ErrorCode::RadiusOutOfRange,
                "measure integrated up to " + describe(v));
  }
  if (const auto* h = std::get_if<HoelderMeasure>(&rep_)) {
    return h->nu * v + h->l0 * std::pow(v, 1.0 + h->alpha) / (1.0 + h->alpha);
  }
  const auto& t = std::get<Tabulated>(rep_);
  const auto& k = t.knots;
  auto hi = std::upper_bound(k.begin(), k.end(), v,
                             [](double x, const Knot& n) { return x < n.radius; });
  if (hi == k.end()) return t.cumulative.back();
  const auto i = static_cast<std::size_t>(std::distance(k.begin(), hi)) - 1;
  const double h = v - k[i].radius;
  return t.cumulative[i] + 0.5 * h * (k[i].value + (*this)(v));
}

bool operator==(const OmegaMeasure& a, const OmegaMeasure& b) {
  if (a.is_hoelder() != b.is_hoelder()) return false;
  if (a.is_hoelder()) return a.hoelder_params() == b.hoelder_params();
  return std::ranges::equal(a.knots(), b.knots());
}

MajorantModel::MajorantModel(double eta, double radius, OmegaMeasure omega)
    : eta_(eta), radius_(radius), omega_(std::move(omega)) {
  if (!(std::isfinite(eta) && eta > 0.0)) {
    throw Error(ErrorCode::InvalidModel, "eta must be finite and > 0");
  }
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw Error(ErrorCode::InvalidModel, "R must be finite and > 0");
  }
  if (radius > omega_.max_radius()) {
    throw Error(ErrorCode::InvalidModel,
                "R = " + describe(radius) + " exceeds the tabulated range " +
                    describe(omega_.max_radius()));
  }
}

double eval_omega(const OmegaMeasure& omega, double v) { return omega(v); }

double majorant(const MajorantModel& model, double v) {
  if (!(v >= 0.0) || v > model.radius()) {
    throw Error(ErrorCode::RadiusOutOfRange,
                "majorant evaluated at " + describe(v) + " outside [0, R]");
  }
  return model.eta() + model.omega().integral(v);
}

double majorant_gap(const MajorantModel& model, double v) {
  return majorant(model, v) - v;
}

double contraction_radius(const MajorantModel& model) {
  const OmegaMeasure& omega = model.omega();
  const double nu = omega.nu();
  if (nu >= 1.0) {
    throw Error(ErrorCode::NuNotContractive,
                "omega_B(0) = " + describe(nu) + " >= 1");
  }
  const double r = model.radius();
  if (omega.is_hoelder()) {
    const auto& h = omega.hoelder_params();
    if (h.l0 == 0.0) return r;
    return std::min(r, std::pow((1.0 - nu) / h.l0, 1.0 / h.alpha));
  }
  if (omega(r) < 1.0) return r;
  const auto k = omega.knots();
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (k[i].value >= 1.0) {
      const double t = (1.0 - k[i - 1].value) / (k[i].value - k[i - 1].value);
      return std::min(r, k[i - 1].radius + t * (k[i].radius - k[i - 1].radius));
    }
  }
  return r;
}

ConvexRoots convex_roots(const std::function<double(double)>& f, double argmin,
                         double radius, double tol, double scale) {
  ConvexRoots out;
  const double f_min = f(argmin);
  const double gtol = tol * scale;
  if (f_min > gtol) return out;
  if (f_min >= -gtol) {
    // Double root: bisection would stop up to sqrt(gtol) short of it.
    out.min_root = argmin;
    out.max_root = argmin;
    out.tangent = true;
    return out;
  }

  out.min_root = bisect(f, argmin, 0.0);
  const double f_r = f(radius);
  if (f_r < 0.0) return out;
  out.max_root = f_r <= 0.0 ? radius : bisect(f, argmin, radius);
  // Roots closer than the merge distance are one double root.
  if (*out.max_root - *out.min_root <
      10.0 * tol * *out.max_root) {
    out.tangent = true;
    out.max_root = out.min_root;
  }
  return out;
}

ScalarRoots scalar_roots(const MajorantModel& model, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "root tolerance must be > 0");
  }
  ScalarRoots out;
  out.contraction_radius = contraction_radius(model);
  const auto roots = convex_roots(
      [&model](double v) { return majorant_gap(model, v); },
      out.contraction_radius, model.radius(), tol, model.eta());
  out.min_root = roots.min_root;
  out.max_root = roots.max_root;
  if (!roots.min_root) return out;
  if (roots.tangent) {
    // Lambda is empty: g does not dip below zero past the minimal root.
    out.uniqueness = {*roots.min_root, Boundary::Closed};
  } else if (!roots.max_root) {
    // g < 0 all the way to R, so phi(R) < R.
    out.uniqueness = {model.radius(), Boundary::Closed};
  } else {
    out.uniqueness = {*roots.max_root, Boundary::Open};
  }
  return out;
}

std::optional<double> minimal_root(const MajorantModel& model, double tol) {
  return scalar_roots(model, tol).min_root;
}

std::optional<double> maximal_root(const MajorantModel& model, double tol) {
  auto roots = scalar_roots(model, tol);
  if (!roots.min_root) {
    throw Error(ErrorCode::NotCertified, "no minimal root on [0, R]");
  }
  return roots.max_root;
}

UniquenessRadius uniqueness_radius(const MajorantModel& model, double tol) {
  auto roots = scalar_roots(model, tol);
  if (!roots.min_root) {
    throw Error(ErrorCode::NotCertified, "no minimal root on [0, R]");
  }
  return roots.uniqueness;
}

std::vector<double> scalar_sequence(const MajorantModel& model, double tol,
                                    int max_iter) {
  if (!(tol > 0.0) || max_iter <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "tol and max_iter must be positive");
  }
  if (!minimal_root(model)) {
    throw Error(ErrorCode::NotCertified,
                "majorizing sequence needs a minimal root on [0, R]");
  }
  std::vector<double> seq{0.0};
  double v = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    const double next = std::max(v, majorant(model, std::min(v, model.radius())));
    seq.push_back(next);
    if (next - v <= tol) return seq;
    v = next;
  }
  throw MaxIterExceeded("majorizing sequence did not settle in " +
                            std::to_string(max_iter) + " steps",
                        std::move(seq));
}

std::vector<double> scalar_sequence_prefix(const MajorantModel& model,
                                           int count) {
  std::vector<double> seq;
  if (count <= 0) return seq;
  seq.reserve(static_cast<std::size_t>(count));
  double v = 0.0;
  seq.push_back(v);
  while (static_cast<int>(seq.size()) < count) {
    v = std::max(v, majorant(model, std::min(v, model.radius())));
    seq.push_back(v);
  }
  return seq;
}

}  // namespace fsi
