#include "fsi/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fsi {
namespace {

constexpr int kMaxChandrasekharNodes = 32;

const FixtureInfo& info_for(const std::string& name) {
  for (const auto& info : fixture_catalog()) {
    if (info.name == name) return info;
  }
  throw Error(ErrorCode::UnknownFixture, "no fixture named '" + name + "'");
}

// Typed access to the raw parameter map, rejecting names the fixture does
// not declare.
class Params {
 public:
  Params(const FixtureSpec& spec, const FixtureInfo& info) : spec_(spec) {
    std::set<std::string> known;
    for (const auto& p : info.params) known.insert(p.name);
    for (const auto& [key, values] : spec.params) {
      if (!known.contains(key)) {
        throw Error(ErrorCode::BadParameters,
                    "fixture '" + info.name + "' has no parameter '" + key + "'");
      }
      for (double v : values) {
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::BadParameters,
                      "parameter '" + key + "' is not finite");
        }
      }
    }
  }

  [[nodiscard]] std::optional<double> maybe_scalar(const std::string& key) const {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) return std::nullopt;
    if (it->second.size() != 1) {
      throw Error(ErrorCode::BadParameters,
                  "parameter '" + key + "' takes a single number");
    }
    return it->second.front();
  }

  [[nodiscard]] double scalar(const std::string& key, double fallback) const {
    return maybe_scalar(key).value_or(fallback);
  }

  [[nodiscard]] Vector vec(const std::string& key,
                           const std::vector<double>& fallback) const {
    auto it = spec_.params.find(key);
    const auto& v = it == spec_.params.end() ? fallback : it->second;
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

 private:
  const FixtureSpec& spec_;
};

double radius_of(const FixtureSpec& spec, const FixtureInfo& info) {
  const double r = spec.radius.value_or(info.default_radius);
  if (!(std::isfinite(r) && r > 0.0)) {
    throw Error(ErrorCode::BadParameters, "R must be finite and > 0");
  }
  return r;
}

// Fixture-side dense inversion; the solver itself never inverts.
Matrix invert(const Matrix& m, const std::string& what) {
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::BadParameters, what + " is singular");
  }
  return lu.inverse();
}

Fixture scalar_quadratic(const FixtureSpec& spec, const FixtureInfo& info) {
  const Params params(spec, info);
  const double c = params.scalar("c", 2.0);
  const double x0 = params.scalar("x0", 2.0);
  const double b = params.scalar("b", 0.25);
  if (b == 0.0) throw Error(ErrorCode::BadParameters, "b must be nonzero");

  Fixture f{.name = info.name, .problem = {}, .analytic = {}, .known_solution = {}};
  Problem& p = f.problem;
  p.residual = [c](const Vector& x) {
    Vector r(1);
    r[0] = x[0] * x[0] - c;
    return r;
  };
  p.jacobian = [](const Vector& x) {
    Matrix j(1, 1);
    j(0, 0) = 2.0 * x[0];
    return j;
  };
  p.slope = Matrix::Constant(1, 1, b);
  p.x0 = Vector::Constant(1, x0);
  p.radius = radius_of(spec, info);
  p.norm = spec.norm.value_or(info.default_norm);

  // |b F'(x) - 1| = |(2 b x0 - 1) + 2 b (x - x0)|
  const double nu = std::abs(2.0 * b * x0 - 1.0);
  const double l0 = 2.0 * std::abs(b);
  f.analytic = AnalyticConstants{
      .l0 = l0,
      .alpha = 1.0,
      .nu = nu,
      .eta = std::abs(b * (x0 * x0 - c)),
      .exact_omega = [nu, l0](double v) { return nu + l0 * v; },
  };
  if (c >= 0.0) {
    f.known_solution = Vector::Constant(1, (x0 < 0.0 ? -1.0 : 1.0) * std::sqrt(c));
  }
  return f;
}

Fixture scalar_holder(const FixtureSpec& spec, const FixtureInfo& info) {
  const Params params(spec, info);
  const double a = params.scalar("a", 0.0);
  const double alpha = params.scalar("alpha", 0.5);
  const double c = params.scalar("c", -2.0 / 3.0);
  const double x0 = params.scalar("x0", 1.2);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::BadParameters, "alpha must lie in (0, 1]");
  }
  const double d0 = std::abs(x0 - a);
  const auto b_given = params.maybe_scalar("b");
  if (!b_given && d0 == 0.0) {
    throw Error(ErrorCode::BadParameters,
                "F'(x0) = 0 at x0 = a; pass b explicitly");
  }
  const double b = b_given.value_or(std::pow(d0, -alpha));
  if (b == 0.0) throw Error(ErrorCode::BadParameters, "b must be nonzero");

  auto value = [a, alpha, c](double x) {
    const double d = x - a;
    const double mag = std::pow(std::abs(d), 1.0 + alpha) / (1.0 + alpha);
    return (d < 0.0 ? -mag : mag) + c;
  };

  Fixture f{.name = info.name, .problem = {}, .analytic = {}, .known_solution = {}};
  Problem& p = f.problem;
  p.residual = [value](const Vector& x) { return Vector::Constant(1, value(x[0])); };
  p.jacobian = [a, alpha](const Vector& x) {
    return Matrix::Constant(1, 1, std::pow(std::abs(x[0] - a), alpha));
  };
  p.slope = Matrix::Constant(1, 1, b);
  p.x0 = Vector::Constant(1, x0);
  p.radius = radius_of(spec, info);
  p.norm = spec.norm.value_or(info.default_norm);

  // | |x-a|^alpha - d0^alpha | <= |x - x0|^alpha gives a Hoelder bound; the
  // exact measure is the larger endpoint value of |b t^alpha - 1| over
  // t in [max(0, d0 - v), d0 + v].
  const double nu = std::abs(b * std::pow(d0, alpha) - 1.0);
  f.analytic = AnalyticConstants{
      .l0 = std::abs(b),
      .alpha = alpha,
      .nu = nu,
      .eta = std::abs(b * value(x0)),
      .exact_omega =
          [b, d0, alpha](double v) {
            const double lo = std::max(0.0, d0 - v);
            return std::max(std::abs(b * std::pow(lo, alpha) - 1.0),
                            std::abs(b * std::pow(d0 + v, alpha) - 1.0));
          },
  };
  const double shift = std::pow(std::abs(c) * (1.0 + alpha), 1.0 / (1.0 + alpha));
  f.known_solution = Vector::Constant(1, c > 0.0 ? a - shift : a + shift);
  return f;
}

Fixture poly2d(const FixtureSpec& spec, const FixtureInfo& info) {
  const Params params(spec, info);
  const double a = params.scalar("a", 0.5);
  const double b = params.scalar("b", -0.3);
  const Vector xs = params.vec("x_star", {1.0, 2.0});
  const Vector x0 = params.vec("x0", {1.1, 1.9});
  if (xs.size() != 2 || x0.size() != 2) {
    throw Error(ErrorCode::BadParameters, "x_star and x0 take two numbers");
  }
  // Right-hand side chosen so that x_star is a root.
  const double c1 = xs[0] * xs[0] + a * xs[1];
  const double c2 = b * xs[0] + xs[1] * xs[1];

  Fixture f{.name = info.name, .problem = {}, .analytic = {}, .known_solution = xs};
  Problem& p = f.problem;
  p.residual = [a, b, c1, c2](const Vector& x) {
    Vector r(2);
    r[0] = x[0] * x[0] + a * x[1] - c1;
    r[1] = b * x[0] + x[1] * x[1] - c2;
    return r;
  };
  p.jacobian = [a, b](const Vector& x) {
    Matrix j(2, 2);
    j << 2.0 * x[0], a, b, 2.0 * x[1];
    return j;
  };
  p.x0 = x0;
  p.slope = invert(p.jacobian(x0), "F'(x0)");
  p.radius = radius_of(spec, info);
  p.norm = spec.norm.value_or(info.default_norm);

  // B (F'(x) - F'(x0)) = 2 B diag(x - x0).  Its induced norm is at most
  // 2 ||B|| ||x - x0||, with equality on the max and one norms.
  const double l0 = 2.0 * induced_norm(p.slope, p.norm);
  AnalyticConstants an{
      .l0 = l0,
      .alpha = 1.0,
      .nu = 0.0,
      .eta = vector_norm(p.slope * p.residual(x0), p.norm),
      .exact_omega = {},
  };
  if (p.norm != Norm::Two) an.exact_omega = [l0](double v) { return l0 * v; };
  f.analytic = std::move(an);
  return f;
}

Fixture chandrasekhar(const FixtureSpec& spec, const FixtureInfo& info) {
  const Params params(spec, info);
  const double c = params.scalar("c", 0.9);
  const double n_raw = params.scalar("n", 16.0);
  if (!(c > 0.0 && c < 1.0)) {
    throw Error(ErrorCode::BadParameters, "c must lie in (0, 1)");
  }
  if (n_raw != std::floor(n_raw) || n_raw < 1 || n_raw > kMaxChandrasekharNodes) {
    throw Error(ErrorCode::BadParameters, "n must be an integer in [1, 32]");
  }
  const auto n = static_cast<Eigen::Index>(n_raw);

  // Composite midpoint rule on [0, 1]: mu_i = (i - 1/2)/n, w = 1/n.
  Matrix kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu_i = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mu_j = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      kernel(i, j) = mu_i / (mu_i + mu_j) / static_cast<double>(n);
    }
  }
  const double half_c = 0.5 * c;

  Fixture f{.name = info.name, .problem = {}, .analytic = {}, .known_solution = {}};
  Problem& p = f.problem;
  p.residual = [kernel, half_c](const Vector& h) {
    const Vector integral = kernel * h;
    return Vector(h - Vector::Ones(h.size()) -
                  half_c * h.cwiseProduct(integral));
  };
  p.jacobian = [kernel, half_c](const Vector& h) {
    const auto m = h.size();
    Matrix j = Matrix::Identity(m, m);
    j.diagonal() -= half_c * (kernel * h);
    j -= half_c * (h.asDiagonal() * kernel);
    return j;
  };
  p.x0 = Vector::Ones(n);
  p.slope = invert(p.jacobian(p.x0), "F'(x0)");
  p.radius = radius_of(spec, info);
  p.norm = spec.norm.value_or(info.default_norm);
  return f;
}

Fixture linear(const FixtureSpec& spec, const FixtureInfo& info) {
  const Params params(spec, info);
  const Vector a_flat = params.vec("A", {2.0, 1.0, 0.0, 4.0});
  const Vector rhs = params.vec("b_vec", {1.0, 2.0});
  const auto n = rhs.size();
  if (n == 0 || a_flat.size() != n * n) {
    throw Error(ErrorCode::BadParameters,
                "A must hold n*n row-major entries for b_vec of length n");
  }
  const Vector x0 = params.vec("x0", std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (x0.size() != n) {
    throw Error(ErrorCode::BadParameters, "x0 must match the length of b_vec");
  }
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = a_flat[i * n + j];
  }

  Fixture f{.name = info.name, .problem = {}, .analytic = {}, .known_solution = {}};
  Problem& p = f.problem;
  p.residual = [a, rhs](const Vector& x) { return Vector(a * x - rhs); };
  p.jacobian = [a](const Vector&) { return a; };
  p.slope = invert(a, "A");
  p.x0 = x0;
  p.radius = radius_of(spec, info);
  p.norm = spec.norm.value_or(info.default_norm);

  f.analytic = AnalyticConstants{
      .l0 = 0.0,
      .alpha = 1.0,
      .nu = 0.0,
      .eta = vector_norm(p.slope * p.residual(x0), p.norm),
      .exact_omega = [](double) { return 0.0; },
  };
  f.known_solution = p.slope * rhs;
  return f;
}

}  // namespace

const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> catalog{
      {"scalar_quadratic",
       "F(x) = x^2 - c with scalar slope B = b",
       {{"c", "2", "constant term"},
        {"x0", "2", "starting point"},
        {"b", "0.25", "fixed slope"}},
       10.0,
       Norm::Max},
      {"scalar_holder",
       "F(x) = sign(x-a)|x-a|^(1+alpha)/(1+alpha) + c, F' Hoelder of order alpha",
       {{"a", "0", "kink location"},
        {"alpha", "0.5", "Hoelder exponent in (0, 1]"},
        {"c", "-0.6666666666666666", "constant term"},
        {"x0", "1.2", "starting point"},
        {"b", "|x0-a|^-alpha", "fixed slope (defaults to 1/F'(x0))"}},
       1.0,
       Norm::Max},
      {"poly2d",
       "F(x) = (x1^2 + a x2 - c1, b x1 + x2^2 - c2) with root x_star, B = F'(x0)^-1",
       {{"a", "0.5", "coupling of x2 in the first equation"},
        {"b", "-0.3", "coupling of x1 in the second equation"},
        {"x_star", "1,2", "prescribed root"},
        {"x0", "1.1,1.9", "starting point"}},
       1.0,
       Norm::Max},
      {"chandrasekhar",
       "H-equation on an n-point midpoint rule, x0 = 1, B = F'(x0)^-1",
       {{"c", "0.9", "albedo in (0, 1)"},
        {"n", "16", "quadrature nodes, 1..32"}},
       12.0,
       Norm::One},
      {"linear",
       "F(x) = A x - b_vec with B = A^-1",
       {{"A", "2,1,0,4", "row-major n x n matrix"},
        {"b_vec", "1,2", "right-hand side"},
        {"x0", "0,...,0", "starting point"}},
       10.0,
       Norm::Max},
  };
  return catalog;
}

Fixture build_fixture(const FixtureSpec& spec) {
  const FixtureInfo& info = info_for(spec.name);
  if (spec.name == "scalar_quadratic") return scalar_quadratic(spec, info);
  if (spec.name == "scalar_holder") return scalar_holder(spec, info);
  if (spec.name == "poly2d") return poly2d(spec, info);
  if (spec.name == "chandrasekhar") return chandrasekhar(spec, info);
  return linear(spec, info);
}

}  // namespace fsi
