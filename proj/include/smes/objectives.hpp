#pragma once

#include <array>
#include <functional>
#include <string>

#include "smes/tensor.hpp"

namespace smes {

/// Smooth unconstrained benchmark with a closed-form gradient and a known
/// minimum. domain gives the per-coordinate box used for test sampling.
struct Objective {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(const Tensor&)> eval;
  std::function<Tensor(const Tensor&)> grad;
  Tensor minimum_point;
  double minimum_value = 0.0;
  std::array<double, 2> domain{-1.0, 1.0};
};

/// f(x) = 1/2 x^T D x with D diagonal, eigenvalues log-spaced in
/// [1, condition]; minimum 0 at the origin. Requires d >= 1 and
/// condition >= 1. For d = 1 the single eigenvalue is 1.
Objective quadratic(std::size_t dimension, double condition);

/// Coupled Rosenbrock, sum over i < d-1 of
/// 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2; minimum 0 at all-ones.
/// Requires d >= 2.
Objective rosenbrock(std::size_t dimension);

}  // namespace smes
