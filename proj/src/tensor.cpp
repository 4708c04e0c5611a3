#include "smes/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace smes {

namespace {

std::size_t shape_product(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

[[noreturn]] void throw_shape_mismatch(const char* what, const Tensor& a, const Tensor& b) {
  std::ostringstream msg;
  msg << what << ": shape mismatch " << shape_to_string(a.shape()) << " vs "
      << shape_to_string(b.shape());
  throw std::invalid_argument(msg.str());
}

template <typename Op>
Tensor zip(const char* what, const Tensor& a, const Tensor& b, Op op) {
  if (!a.same_shape(b)) throw_shape_mismatch(what, a, b);
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

template <typename Op>
Tensor map(const Tensor& a, Op op) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i]);
  return out;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != data_.size()) {
    std::ostringstream msg;
    msg << "tensor: shape " << shape_to_string(shape_) << " requires " << shape_product(shape_)
        << " elements, got " << data_.size();
    throw std::invalid_argument(msg.str());
  }
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  Tensor out(std::move(shape));
  out.fill(value);
  return out;
}

Tensor Tensor::from_vector(std::vector<double> values) {
  std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::from_matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::invalid_argument("tensor: rows() requires rank 2, have " + shape_to_string(shape_));
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::invalid_argument("tensor: cols() requires rank 2, have " + shape_to_string(shape_));
  return shape_[1];
}

std::size_t Tensor::checked_index(std::size_t row, std::size_t col) const {
  if (rank() != 2 || row >= shape_[0] || col >= shape_[1]) {
    std::ostringstream msg;
    msg << "tensor: index (" << row << ", " << col << ") out of range for " << shape_to_string(shape_);
    throw std::out_of_range(msg.str());
  }
  return row * shape_[1] + col;
}

double Tensor::at(std::size_t row, std::size_t col) const { return data_[checked_index(row, col)]; }

double& Tensor::at(std::size_t row, std::size_t col) { return data_[checked_index(row, col)]; }

void Tensor::fill(double value) {
  for (double& x : data_) x = value;
}

std::string shape_to_string(std::span<const std::size_t> shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ", ";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

Tensor add(const Tensor& a, const Tensor& b) { return zip("add", a, b, std::plus<>()); }
Tensor sub(const Tensor& a, const Tensor& b) { return zip("sub", a, b, std::minus<>()); }
Tensor mul(const Tensor& a, const Tensor& b) { return zip("mul", a, b, std::multiplies<>()); }
Tensor div(const Tensor& a, const Tensor& b) { return zip("div", a, b, std::divides<>()); }

Tensor add(const Tensor& a, double s) { return map(a, [s](double x) { return x + s; }); }
Tensor sub(const Tensor& a, double s) { return map(a, [s](double x) { return x - s; }); }
Tensor mul(const Tensor& a, double s) { return map(a, [s](double x) { return x * s; }); }
Tensor div(const Tensor& a, double s) { return map(a, [s](double x) { return x / s; }); }

Tensor pow_scalar(const Tensor& a, double exponent) {
  return map(a, [exponent](double x) { return std::pow(x, exponent); });
}

Tensor max_scalar(const Tensor& a, double floor) {
  return map(a, [floor](double x) { return std::max(x, floor); });
}

Tensor matvec(const Tensor& w, const Tensor& x) {
  if (w.rank() != 2 || x.rank() != 1 || w.cols() != x.size()) {
    throw_shape_mismatch("matvec", w, x);
  }
  std::size_t m = w.rows(), n = w.cols();
  Tensor y({m});
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[i * n + j] * x[j];
    y[i] = acc;
  }
  return y;
}

double sum(const Tensor& a) {
  double acc = 0.0;
  for (double x : a.values()) acc += x;
  return acc;
}

double squared_norm(const Tensor& a) {
  double acc = 0.0;
  for (double x : a.values()) acc += x * x;
  return acc;
}

bool all_finite(const Tensor& a) {
  for (double x : a.values()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace smes
