#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "smes/rng.hpp"
#include "smes/tensor.hpp"

using smes::Tensor;

TEST_CASE("elementwise add") {
  Tensor a = Tensor::from_vector({1.0, 2.0});
  Tensor b = Tensor::from_vector({3.0, 4.0});
  Tensor c = smes::add(a, b);
  CHECK(c[0] == 4.0);
  CHECK(c[1] == 6.0);
}

TEST_CASE("pow_scalar is a square root at exponent one half") {
  Tensor a = Tensor::from_vector({4.0});
  CHECK(smes::pow_scalar(a, 0.5)[0] == 2.0);
}

TEST_CASE("division by zero follows IEEE semantics") {
  Tensor a = Tensor::from_vector({1.0});
  Tensor b = Tensor::from_vector({0.0});
  CHECK(smes::div(a, b)[0] == std::numeric_limits<double>::infinity());
}

TEST_CASE("shape mismatch names both shapes") {
  Tensor a = Tensor::zeros({2, 3});
  Tensor b = Tensor::zeros({3});
  CHECK_THROWS_WITH_AS(smes::add(a, b), doctest::Contains("[2, 3]"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(smes::add(a, b), doctest::Contains("[3]"), std::invalid_argument);
}

TEST_CASE("shape and data length must agree") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("row-major get/set round trip") {
  Tensor t = Tensor::zeros({3, 4});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) t.at(i, j) = 10.0 * static_cast<double>(i) + static_cast<double>(j);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(t[i * 4 + j] == 10.0 * static_cast<double>(i) + static_cast<double>(j));
      CHECK(t.at(i, j) == t[i * 4 + j]);
    }
  }
}

TEST_CASE("matvec identity and hand arithmetic") {
  Tensor eye = Tensor::from_matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
  Tensor x = Tensor::from_vector({3.0, 7.0});
  CHECK(smes::matvec(eye, x) == x);

  Tensor a = Tensor::from_matrix(2, 2, {1.0, 2.0, 3.0, 4.0});
  Tensor ones = Tensor::from_vector({1.0, 1.0});
  Tensor y = smes::matvec(a, ones);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 7.0);
}

TEST_CASE("matvec dimension mismatch throws") {
  Tensor a = Tensor::zeros({2, 3});
  Tensor x = Tensor::zeros({2});
  CHECK_THROWS_AS(smes::matvec(a, x), std::invalid_argument);
}

TEST_CASE("matvec matches a naive triple-loop oracle exactly") {
  smes::RngStream stream(99);
  Tensor w = stream.uniform_tensor(-1.0, 1.0, {8, 8});
  Tensor x = stream.uniform_tensor(-1.0, 1.0, {8});

  Tensor expected({8});
  for (std::size_t i = 0; i < 8; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 8; ++j) acc += w.at(i, j) * x[j];
    expected[i] = acc;
  }
  CHECK(smes::matvec(w, x) == expected);
}

TEST_CASE("matvec distributes over addition") {
  smes::RngStream stream(7);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a = stream.uniform_tensor(-1e3, 1e3, {5, 6});
    Tensor x = stream.uniform_tensor(-1e3, 1e3, {6});
    Tensor y = stream.uniform_tensor(-1e3, 1e3, {6});
    Tensor lhs = smes::matvec(a, smes::add(x, y));
    Tensor rhs = smes::add(smes::matvec(a, x), smes::matvec(a, y));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      double scale = std::max({1.0, std::abs(lhs[i]), std::abs(rhs[i])});
      CHECK(std::abs(lhs[i] - rhs[i]) / scale < 1e-12);
    }
  }
}

TEST_CASE("max_scalar floors elementwise") {
  Tensor a = Tensor::from_vector({-2.0, 0.5});
  Tensor f = smes::max_scalar(a, 0.0);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.5);
}
