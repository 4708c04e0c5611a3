#pragma once

#include <string>
#include <vector>

#include "smes/rng.hpp"
#include "smes/tensor.hpp"

namespace smes {

enum class Activation { sigmoid, relu, identity };
enum class Loss { softmax_cross_entropy, mean_squared_error };

std::string to_string(Activation a);
std::string to_string(Loss l);
Activation activation_from_string(const std::string& name);
Loss loss_from_string(const std::string& name);

/// sigmoid 1/(1+e^-x) in the branch-stable form (exponentials of negative
/// magnitude only, no overflow for any finite input); relu max(0, x);
/// identity passes through.
Tensor activation_apply(Activation kind, const Tensor& z);

/// sigmoid: s(z)(1-s(z)); relu: 1 for z > 0 and 0 for z <= 0; identity: 1.
Tensor activation_derivative(Activation kind, const Tensor& z);

/// mean_squared_error: mean over components of (prediction - target)^2.
/// softmax_cross_entropy: -sum target_i * log softmax(prediction)_i, with
/// prediction taken as logits; target must be a one-hot or probability
/// vector. Computed via log-sum-exp, never materializing the softmax.
double loss_eval(Loss kind, const Tensor& prediction, const Tensor& target);

/// Gradient of the loss with respect to the prediction vector. For the
/// fused softmax cross-entropy this is softmax(prediction) - target; for
/// MSE it is 2 (prediction - target) / n.
Tensor loss_gradient(Loss kind, const Tensor& prediction, const Tensor& target);

Tensor softmax(const Tensor& logits);

struct DenseLayer {
  Tensor weights;  // out x in
  Tensor bias;     // out
  Activation activation = Activation::identity;

  Tensor weight_grad;
  Tensor bias_grad;

  // Populated by forward, consumed by backward.
  Tensor cached_input;
  Tensor cached_preactivation;

  DenseLayer(std::size_t in, std::size_t out, Activation act);

  std::size_t in_size() const { return weights.cols(); }
  std::size_t out_size() const { return weights.rows(); }
};

/// Per-layer gradient Frobenius norms (weights and bias jointly) plus the
/// sample loss, as produced by one backward pass.
struct GradientReport {
  std::vector<double> layer_grad_norms;
  double loss = 0.0;
};

/// Fully connected network over single samples. forward caches per-layer
/// inputs and pre-activations; backward consumes them and accumulates into
/// each layer's weight_grad/bias_grad (callers zero between batches).
/// Mini-batch gradients are the mean over per-sample backward passes,
/// formed by the training loop.
class Network {
 public:
  Network(std::vector<DenseLayer> layers, Loss loss);

  Tensor forward(const Tensor& input);

  /// Requires a prior forward on this instance; throws std::logic_error
  /// otherwise. Repeating backward on the same cached forward adds the
  /// same contribution again, so zero_gradients + backward is idempotent.
  GradientReport backward(const Tensor& target);

  void zero_gradients();

  std::size_t input_size() const { return layers_.front().in_size(); }
  std::size_t output_size() const { return layers_.back().out_size(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  Loss loss() const { return loss_; }

  /// Parameter and gradient tensors interleaved per layer: W0, b0, W1, b1, ...
  std::vector<Tensor*> parameters();
  std::vector<Tensor*> gradients();

 private:
  std::vector<DenseLayer> layers_;
  Loss loss_;
  bool cache_valid_ = false;
  Tensor last_output_;
};

/// Build a network with weights drawn uniform(-s, s), s =
/// sqrt(6 / (fan_in + fan_out)), scaled by 4 for sigmoid layers; biases
/// zero. sizes = [in, h1, ..., out]; activations has one entry per layer.
Network init_network(const std::vector<std::size_t>& sizes,
                     const std::vector<Activation>& activations, Loss loss, RngStream& stream);

}  // namespace smes
