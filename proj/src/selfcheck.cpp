#include "smes/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "smes/net.hpp"
#include "smes/objectives.hpp"
#include "smes/optimizer.hpp"
#include "smes/rng.hpp"

namespace smes {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << v;
  return out.str();
}

std::vector<Tensor> smes_trajectory(const Objective& obj, Tensor x, const SmesConfig& cfg,
                                    int steps) {
  SmesState state = smes_init(x.shape());
  std::vector<Tensor> traj;
  traj.reserve(static_cast<std::size_t>(steps));
  for (int t = 0; t < steps; ++t) {
    Tensor g = obj.grad(x);
    smes_step(x, g, state, cfg);
    traj.push_back(x);
  }
  return traj;
}

SuiteResult check_sgd_equivalence() {
  SuiteResult result{"sgd-equivalence", false, ""};
  Objective obj = quadratic(10, 10.0);
  RngStream stream(2024);
  Tensor x0 = stream.uniform_tensor(-2.0, 2.0, {10});

  SmesConfig cfg;
  cfg.alpha = 0.0;
  cfg.eta = 0.05;
  cfg.weight_decay = 0.0;

  std::vector<std::vector<Tensor>> trajectories;
  for (double beta2 : {0.9, 0.999, 0.9999}) {
    cfg.beta2 = beta2;
    trajectories.push_back(smes_trajectory(obj, x0, cfg, 300));
  }
  bool identical = trajectories[0] == trajectories[1] && trajectories[1] == trajectories[2];
  result.passed = identical;
  result.detail = identical ? "trajectories bitwise identical across beta2 {0.9, 0.999, 0.9999}"
                            : "trajectories differ across beta2 values";
  return result;
}

// Textbook Adam, kept separate from smes_step on purpose.
void adam_reference_step(Tensor& x, const Tensor& g, Tensor& m, Tensor& v, std::uint64_t t,
                         double eta, double beta1, double beta2, double eps) {
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < x.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    double m_hat = m[i] / bc1;
    double v_hat = v[i] / bc2;
    x[i] -= eta * m_hat / (std::sqrt(v_hat) + eps);
  }
}

SuiteResult check_adam_equivalence(double alpha) {
  SuiteResult result{"adam-equivalence", false, ""};
  Objective obj = rosenbrock(2);
  Tensor x0 = Tensor::from_vector({-1.2, 1.0});

  SmesConfig cfg;
  cfg.alpha = alpha;
  cfg.eta = 0.001;
  cfg.beta1 = 0.9;
  cfg.beta2 = 0.999;
  cfg.epsilon = 1e-8;

  Tensor x = x0;
  SmesState state = smes_init(x.shape());
  Tensor xr = x0;
  Tensor m({2}), v({2});

  double max_diff = 0.0;
  for (std::uint64_t t = 1; t <= 1000; ++t) {
    Tensor g = obj.grad(x);
    smes_step(x, g, state, cfg);
    Tensor gr = obj.grad(xr);
    adam_reference_step(xr, gr, m, v, t, cfg.eta, cfg.beta1, cfg.beta2, cfg.epsilon);
    for (std::size_t i = 0; i < x.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(x[i] - xr[i]));
    }
  }
  result.passed = max_diff <= 1e-12;
  result.detail = "max per-coordinate deviation from textbook Adam over 1000 steps: " + fmt(max_diff);
  return result;
}

SuiteResult check_scale_law() {
  SuiteResult result{"scale-law", false, ""};
  const int steps = 50;
  const std::size_t dim = 5;

  RngStream stream(77);
  std::vector<Tensor> grads;
  for (int t = 0; t < steps; ++t) {
    Tensor g({dim});
    for (std::size_t i = 0; i < dim; ++i) {
      double mag = stream.uniform(0.5, 1.5);
      g[i] = stream.next_unit() < 0.5 ? -mag : mag;
    }
    grads.push_back(std::move(g));
  }

  double worst = 0.0;
  for (double alpha : {-0.3, 0.0, 0.25, 0.5}) {
    for (double c : {0.1, 10.0}) {
      SmesConfig cfg;
      cfg.alpha = alpha;
      cfg.eta = 0.01;
      cfg.epsilon = 0.0;
      cfg.weight_decay = 0.0;

      Tensor x1({dim}), xc({dim});
      SmesState s1 = smes_init({dim}), sc = smes_init({dim});
      double expected_scale = std::pow(c, 1.0 - 2.0 * alpha);

      for (int t = 0; t < steps; ++t) {
        Tensor prev1 = x1, prevc = xc;
        smes_step(x1, grads[static_cast<std::size_t>(t)], s1, cfg);
        Tensor scaled = mul(grads[static_cast<std::size_t>(t)], c);
        smes_step(xc, scaled, sc, cfg);
        for (std::size_t i = 0; i < dim; ++i) {
          double step1 = std::abs(x1[i] - prev1[i]);
          double stepc = std::abs(xc[i] - prevc[i]);
          double rel = std::abs(stepc - expected_scale * step1) / (expected_scale * step1);
          worst = std::max(worst, rel);
        }
      }
    }
  }
  result.passed = worst < 1e-9;
  result.detail = "max relative error of the c^(1-2*alpha) step-scale law: " + fmt(worst);
  return result;
}

SuiteResult check_bias_correction() {
  SuiteResult result{"bias-correction", false, ""};
  const double g = 0.3;
  SmesConfig cfg;
  cfg.alpha = 0.5;

  Tensor x({1});
  SmesState state = smes_init({1});
  Tensor grad = Tensor::from_vector({g});

  double worst = 0.0;
  for (int t = 1; t <= 100; ++t) {
    smes_step(x, grad, state, cfg);
    double m_hat = state.m[0] / (1.0 - std::pow(cfg.beta1, t));
    double v_hat = state.v[0] / (1.0 - std::pow(cfg.beta2, t));
    worst = std::max(worst, std::abs(m_hat - g));
    worst = std::max(worst, std::abs(v_hat - g * g));
  }
  result.passed = worst <= 1e-12;
  result.detail = "max |m_hat - g|, |v_hat - g^2| over t = 1..100 with constant g: " + fmt(worst);
  return result;
}

double fd_relative_error(Network& net, const Tensor& x, const Tensor& target) {
  const double h = 1e-5;
  net.zero_gradients();
  net.forward(x);
  net.backward(target);

  double worst = 0.0;
  std::vector<Tensor*> params = net.parameters();
  std::vector<Tensor*> grads = net.gradients();
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& param = *params[p];
    for (std::size_t i = 0; i < param.size(); ++i) {
      double saved = param[i];
      param[i] = saved + h;
      double lp = loss_eval(net.loss(), net.forward(x), target);
      param[i] = saved - h;
      double lm = loss_eval(net.loss(), net.forward(x), target);
      param[i] = saved;
      double fd = (lp - lm) / (2.0 * h);
      double analytic = (*grads[p])[i];
      double denom = std::max(std::abs(fd), std::abs(analytic));
      if (denom < 1e-10) continue;  // both effectively zero (dead relu paths)
      worst = std::max(worst, std::abs(fd - analytic) / denom);
    }
  }
  net.forward(x);  // restore caches for the unperturbed point
  return worst;
}

SuiteResult check_finite_differences() {
  SuiteResult result{"finite-differences", false, ""};
  RngStream stream(4242);

  double worst = 0.0;
  for (Activation act : {Activation::sigmoid, Activation::relu, Activation::identity}) {
    for (Loss loss : {Loss::softmax_cross_entropy, Loss::mean_squared_error}) {
      for (int instance = 0; instance < 5; ++instance) {
        Network net = init_network({4, 6, 3}, {act, Activation::identity}, loss, stream);
        Tensor x = stream.uniform_tensor(-1.0, 1.0, {4});
        Tensor target({3});
        target[static_cast<std::size_t>(stream.next_below(3))] = 1.0;
        worst = std::max(worst, fd_relative_error(net, x, target));
      }
    }
  }
  result.passed = worst < 1e-6;
  result.detail = "max relative error vs central differences (h = 1e-5): " + fmt(worst);
  return result;
}

}  // namespace

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options) {
  std::vector<SuiteResult> results;
  results.push_back(check_sgd_equivalence());
  results.push_back(check_adam_equivalence(options.adam_oracle_alpha));
  results.push_back(check_scale_law());
  results.push_back(check_bias_correction());
  results.push_back(check_finite_differences());
  return results;
}

}  // namespace smes
