#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace fsi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Norm { Max, One, Two };

std::string_view to_string(Norm n) noexcept;
std::optional<Norm> parse_norm(std::string_view s) noexcept;

double vector_norm(const Vector& v, Norm norm);

// Operator norm induced by `norm`: max row sum (Max), max column sum (One),
// or the spectral norm estimated by 50 seeded power-iteration steps (Two).
double induced_norm(const Matrix& m, Norm norm);

}  // namespace fsi
