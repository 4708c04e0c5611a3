#include "smes/net.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace smes {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  throw std::logic_error("unreachable activation");
}

std::string to_string(Loss l) {
  return l == Loss::softmax_cross_entropy ? "softmax_ce" : "mse";
}

Activation activation_from_string(const std::string& name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

Loss loss_from_string(const std::string& name) {
  if (name == "softmax_ce") return Loss::softmax_cross_entropy;
  if (name == "mse") return Loss::mean_squared_error;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

namespace {

double sigmoid_stable(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor activation_apply(Activation kind, const Tensor& z) {
  Tensor out(z.shape());
  switch (kind) {
    case Activation::sigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = sigmoid_stable(z[i]);
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::max(0.0, z[i]);
      break;
    case Activation::identity:
      out = z;
      break;
  }
  return out;
}

Tensor activation_derivative(Activation kind, const Tensor& z) {
  Tensor out(z.shape());
  switch (kind) {
    case Activation::sigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) {
        double s = sigmoid_stable(z[i]);
        out[i] = s * (1.0 - s);
      }
      break;
    case Activation::relu:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > 0.0 ? 1.0 : 0.0;
      break;
    case Activation::identity:
      out.fill(1.0);
      break;
  }
  return out;
}

Tensor softmax(const Tensor& logits) {
  Tensor out(logits.shape());
  double zmax = *std::max_element(logits.values().begin(), logits.values().end());
  double denom = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - zmax);
    denom += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= denom;
  return out;
}

double loss_eval(Loss kind, const Tensor& prediction, const Tensor& target) {
  if (!prediction.same_shape(target)) {
    throw std::invalid_argument("loss: shape mismatch " + shape_to_string(prediction.shape()) +
                                " vs " + shape_to_string(target.shape()));
  }
  if (kind == Loss::mean_squared_error) {
    double acc = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
      double r = prediction[i] - target[i];
      acc += r * r;
    }
    return acc / static_cast<double>(prediction.size());
  }
  // -sum t_i log p_i = logsumexp(z) - sum t_i z_i for sum t_i = 1.
  double zmax = *std::max_element(prediction.values().begin(), prediction.values().end());
  double expsum = 0.0;
  for (double z : prediction.values()) expsum += std::exp(z - zmax);
  double lse = zmax + std::log(expsum);
  double dot = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) dot += target[i] * prediction[i];
  return lse - dot;
}

Tensor loss_gradient(Loss kind, const Tensor& prediction, const Tensor& target) {
  if (!prediction.same_shape(target)) {
    throw std::invalid_argument("loss: shape mismatch " + shape_to_string(prediction.shape()) +
                                " vs " + shape_to_string(target.shape()));
  }
  if (kind == Loss::mean_squared_error) {
    double scale = 2.0 / static_cast<double>(prediction.size());
    Tensor out(prediction.shape());
    for (std::size_t i = 0; i < prediction.size(); ++i) out[i] = scale * (prediction[i] - target[i]);
    return out;
  }
  Tensor p = softmax(prediction);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= target[i];
  return p;
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Activation act)
    : weights({out, in}),
      bias({out}),
      activation(act),
      weight_grad({out, in}),
      bias_grad({out}) {
  if (in == 0 || out == 0) throw std::invalid_argument("dense layer sizes must be >= 1");
}

Network::Network(std::vector<DenseLayer> layers, Loss loss)
    : layers_(std::move(layers)), loss_(loss) {
  if (layers_.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].in_size() != layers_[l - 1].out_size()) {
      std::ostringstream msg;
      msg << "network: layer " << l - 1 << " output " << layers_[l - 1].out_size()
          << " does not chain into layer " << l << " input " << layers_[l].in_size();
      throw std::invalid_argument(msg.str());
    }
  }
}

Tensor Network::forward(const Tensor& input) {
  if (input.rank() != 1 || input.size() != input_size()) {
    throw std::invalid_argument("forward: input shape " + shape_to_string(input.shape()) +
                                " does not match first layer input size " +
                                std::to_string(input_size()));
  }
  Tensor h = input;
  for (DenseLayer& layer : layers_) {
    layer.cached_input = h;
    Tensor z = matvec(layer.weights, h);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += layer.bias[i];
    layer.cached_preactivation = z;
    h = activation_apply(layer.activation, z);
  }
  cache_valid_ = true;
  last_output_ = h;
  return h;
}

GradientReport Network::backward(const Tensor& target) {
  if (!cache_valid_) throw std::logic_error("backward called before forward");
  if (!target.same_shape(last_output_)) {
    throw std::invalid_argument("backward: target shape " + shape_to_string(target.shape()) +
                                " does not match output shape " +
                                shape_to_string(last_output_.shape()));
  }

  GradientReport report;
  report.loss = loss_eval(loss_, last_output_, target);
  report.layer_grad_norms.assign(layers_.size(), 0.0);

  // d(loss)/d(h^L), then walk layers back multiplying by diag(act'(z)) W.
  Tensor upstream = loss_gradient(loss_, last_output_, target);
  for (std::size_t l = layers_.size(); l-- > 0;) {
    DenseLayer& layer = layers_[l];
    Tensor actd = activation_derivative(layer.activation, layer.cached_preactivation);
    std::size_t out = layer.out_size(), in = layer.in_size();

    double norm_sq = 0.0;
    Tensor next_upstream({in});
    for (std::size_t i = 0; i < out; ++i) {
      double delta = upstream[i] * actd[i];
      layer.bias_grad[i] += delta;
      norm_sq += delta * delta;
      for (std::size_t j = 0; j < in; ++j) {
        double dw = delta * layer.cached_input[j];
        layer.weight_grad[i * in + j] += dw;
        norm_sq += dw * dw;
        next_upstream[j] += delta * layer.weights[i * in + j];
      }
    }
    report.layer_grad_norms[l] = std::sqrt(norm_sq);
    upstream = std::move(next_upstream);
  }
  return report;
}

void Network::zero_gradients() {
  for (DenseLayer& layer : layers_) {
    layer.weight_grad.fill(0.0);
    layer.bias_grad.fill(0.0);
  }
}

std::vector<Tensor*> Network::parameters() {
  std::vector<Tensor*> out;
  out.reserve(layers_.size() * 2);
  for (DenseLayer& layer : layers_) {
    out.push_back(&layer.weights);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<Tensor*> Network::gradients() {
  std::vector<Tensor*> out;
  out.reserve(layers_.size() * 2);
  for (DenseLayer& layer : layers_) {
    out.push_back(&layer.weight_grad);
    out.push_back(&layer.bias_grad);
  }
  return out;
}

Network init_network(const std::vector<std::size_t>& sizes,
                     const std::vector<Activation>& activations, Loss loss, RngStream& stream) {
  if (sizes.size() < 2) throw std::invalid_argument("init_network: need at least [in, out] sizes");
  if (activations.size() != sizes.size() - 1) {
    throw std::invalid_argument("init_network: expected " + std::to_string(sizes.size() - 1) +
                                " activations, got " + std::to_string(activations.size()));
  }
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("init_network: layer sizes must be >= 1");
  }

  std::vector<DenseLayer> layers;
  layers.reserve(activations.size());
  for (std::size_t l = 0; l < activations.size(); ++l) {
    DenseLayer layer(sizes[l], sizes[l + 1], activations[l]);
    double s = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
    if (activations[l] == Activation::sigmoid) s *= 4.0;
    // Row-major draw order keeps seeded init reproducible.
    for (std::size_t i = 0; i < layer.weights.size(); ++i) layer.weights[i] = stream.uniform(-s, s);
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers), loss);
}

}  // namespace smes
