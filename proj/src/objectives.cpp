#include "smes/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace smes {

namespace {

void check_point(const Objective& obj, const Tensor& x) {
  if (x.rank() != 1 || x.size() != obj.dimension) {
    throw std::invalid_argument(obj.name + ": expected point of dimension " +
                                std::to_string(obj.dimension) + ", got shape " +
                                shape_to_string(x.shape()));
  }
}

}  // namespace

Objective quadratic(std::size_t dimension, double condition) {
  if (dimension < 1) throw std::invalid_argument("quadratic: dimension must be >= 1");
  if (!(condition >= 1.0)) throw std::invalid_argument("quadratic: condition must be >= 1");

  std::vector<double> eigenvalues(dimension, 1.0);
  if (dimension > 1) {
    double log_cond = std::log(condition);
    for (std::size_t i = 0; i < dimension; ++i) {
      eigenvalues[i] = std::exp(log_cond * static_cast<double>(i) / static_cast<double>(dimension - 1));
    }
  }

  Objective obj;
  obj.name = "quadratic";
  obj.dimension = dimension;
  obj.minimum_point = Tensor({dimension});
  obj.minimum_value = 0.0;
  obj.domain = {-10.0, 10.0};
  obj.eval = [obj, eigenvalues](const Tensor& x) {
    check_point(obj, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += eigenvalues[i] * x[i] * x[i];
    return 0.5 * acc;
  };
  obj.grad = [obj, eigenvalues](const Tensor& x) {
    check_point(obj, x);
    Tensor g(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = eigenvalues[i] * x[i];
    return g;
  };
  return obj;
}

Objective rosenbrock(std::size_t dimension) {
  if (dimension < 2) throw std::invalid_argument("rosenbrock: dimension must be >= 2");

  Objective obj;
  obj.name = "rosenbrock";
  obj.dimension = dimension;
  obj.minimum_point = Tensor::full({dimension}, 1.0);
  obj.minimum_value = 0.0;
  obj.domain = {-2.0, 2.0};
  obj.eval = [obj](const Tensor& x) {
    check_point(obj, x);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double a = x[i + 1] - x[i] * x[i];
      double b = 1.0 - x[i];
      acc += 100.0 * a * a + b * b;
    }
    return acc;
  };
  obj.grad = [obj](const Tensor& x) {
    check_point(obj, x);
    Tensor g(x.shape());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      double a = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * a;
    }
    return g;
  };
  return obj;
}

}  // namespace smes
