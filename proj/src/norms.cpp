#include "fsi/norms.hpp"

#include <cmath>
#include <random>

namespace fsi {
namespace {

constexpr int kPowerSteps = 50;
constexpr std::uint64_t kPowerSeed = 0x5eed'cafe;

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  std::mt19937_64 gen(kPowerSeed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector x(m.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unit(gen);
  x.normalize();
  double sigma = 0.0;
  for (int k = 0; k < kPowerSteps; ++k) {
    const Vector y = m.transpose() * (m * x);
    const double len = y.norm();
    if (len == 0.0) return 0.0;
    x = y / len;
    sigma = (m * x).norm();
  }
  return sigma;
}

}  // namespace

std::string_view to_string(Norm n) noexcept {
  switch (n) {
    case Norm::Max: return "max";
    case Norm::One: return "one";
    case Norm::Two: return "two";
  }
  return "max";
}

std::optional<Norm> parse_norm(std::string_view s) noexcept {
  if (s == "max" || s == "inf") return Norm::Max;
  if (s == "one" || s == "1") return Norm::One;
  if (s == "two" || s == "2") return Norm::Two;
  return std::nullopt;
}

double vector_norm(const Vector& v, Norm norm) {
  if (v.size() == 0) return 0.0;
  switch (norm) {
    case Norm::Max: return v.cwiseAbs().maxCoeff();
    case Norm::One: return v.cwiseAbs().sum();
    case Norm::Two: return v.norm();
  }
  return 0.0;
}

double induced_norm(const Matrix& m, Norm norm) {
  if (m.size() == 0) return 0.0;
  switch (norm) {
    case Norm::Max: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case Norm::One: return m.cwiseAbs().colwise().sum().maxCoeff();
    case Norm::Two: return spectral_norm(m);
  }
  return 0.0;
}

}  // namespace fsi
