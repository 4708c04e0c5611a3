#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace smes {

/// Dense row-major tensor of 64-bit floats, the value carrier for every
/// module. Element (i, j) of an m x n tensor lives at data()[i * n + j].
/// The shape is fixed at construction; elements are mutable in place.
class Tensor {
 public:
  Tensor() : shape_{0} {}
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<std::size_t> shape, double value);
  static Tensor from_vector(std::vector<double> values);
  static Tensor from_matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  /// Row-major 2-d access; bounds and rank are checked.
  double at(std::size_t row, std::size_t col) const;
  double& at(std::size_t row, std::size_t col);

  std::size_t rows() const;
  std::size_t cols() const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool operator==(const Tensor& other) const = default;

  void fill(double value);

 private:
  std::size_t checked_index(std::size_t row, std::size_t col) const;

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string shape_to_string(std::span<const std::size_t> shape);

// Elementwise arithmetic. Binary tensor forms require equal shapes and
// throw std::invalid_argument naming both shapes otherwise. Division
// follows IEEE semantics (x/0 yields inf); callers guard when needed.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, double s);
Tensor sub(const Tensor& a, double s);
Tensor mul(const Tensor& a, double s);
Tensor div(const Tensor& a, double s);
Tensor pow_scalar(const Tensor& a, double exponent);
Tensor max_scalar(const Tensor& a, double floor);

/// Standard matrix-vector product: w is m x n, x has length n.
Tensor matvec(const Tensor& w, const Tensor& x);

double sum(const Tensor& a);
double squared_norm(const Tensor& a);
bool all_finite(const Tensor& a);

}  // namespace smes
