#include "smes/optimizer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace smes {

std::string to_string(DecayMode m) {
  switch (m) {
    case DecayMode::coupled_l2: return "coupled";
    case DecayMode::decoupled: return "decoupled";
    case DecayMode::none: return "none";
  }
  throw std::logic_error("unreachable decay mode");
}

DecayMode decay_mode_from_string(const std::string& name) {
  if (name == "coupled") return DecayMode::coupled_l2;
  if (name == "decoupled") return DecayMode::decoupled;
  if (name == "none") return DecayMode::none;
  throw std::invalid_argument("unknown decay mode '" + name + "'");
}

void SmesConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("smes config: eta must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("smes config: beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("smes config: beta2 must be in [0, 1)");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("smes config: epsilon must be >= 0");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("smes config: weight_decay must be >= 0");
  if (!(v_floor > 0.0)) throw std::invalid_argument("smes config: v_floor must be > 0");
  if (clip_threshold && !(*clip_threshold > 0.0)) {
    throw std::invalid_argument("smes config: clip_threshold must be > 0");
  }
  if (!std::isfinite(alpha)) throw std::invalid_argument("smes config: alpha must be finite");
}

SmesState smes_init(std::vector<std::size_t> param_shape) {
  SmesState state;
  state.m = Tensor(param_shape);
  state.v = Tensor(std::move(param_shape));
  state.t = 0;
  return state;
}

void clip_global_norm(std::span<Tensor* const> grads, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("clip_global_norm: threshold must be > 0");
  double norm_sq = 0.0;
  for (const Tensor* g : grads) norm_sq += squared_norm(*g);
  double norm = std::sqrt(norm_sq);
  if (norm <= threshold) return;
  double scale = threshold / norm;
  for (Tensor* g : grads) {
    for (double& x : g->values()) x *= scale;
  }
}

std::vector<Tensor> clip_global_norm(std::vector<Tensor> grads, double threshold) {
  std::vector<Tensor*> ptrs;
  ptrs.reserve(grads.size());
  for (Tensor& g : grads) ptrs.push_back(&g);
  clip_global_norm(std::span<Tensor* const>(ptrs), threshold);
  return grads;
}

void smes_step(Tensor& param, const Tensor& grad, SmesState& state, const SmesConfig& cfg,
               std::string_view label) {
  if (!param.same_shape(grad) || !param.same_shape(state.m) || !param.same_shape(state.v)) {
    throw std::invalid_argument("smes_step: shapes disagree for " + std::string(label) + ": param " +
                                shape_to_string(param.shape()) + ", grad " +
                                shape_to_string(grad.shape()) + ", state " +
                                shape_to_string(state.m.shape()));
  }
  if (!all_finite(grad)) {
    throw divergence_error("smes_step: non-finite gradient for " + std::string(label));
  }

  const bool coupled = cfg.decay_mode == DecayMode::coupled_l2 && cfg.weight_decay > 0.0;
  const bool decoupled = cfg.decay_mode == DecayMode::decoupled && cfg.weight_decay > 0.0;
  const bool negative_alpha = cfg.alpha < 0.0;

  std::vector<double> pre_step;
  if (decoupled) pre_step.assign(param.values().begin(), param.values().end());

  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

  for (std::size_t i = 0; i < param.size(); ++i) {
    double g = grad[i];
    if (coupled) g += cfg.weight_decay * param[i];

    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;

    double m_hat = state.m[i] / bc1;
    double v_hat = state.v[i] / bc2;

    // std::pow already gives the required corner values: pow(0, a>0) = 0
    // and pow(0, 0) = 1; the floor handles the remaining alpha < 0 pole.
    double base = negative_alpha ? std::max(v_hat, cfg.v_floor) : v_hat;
    double denom = std::pow(base, cfg.alpha) + cfg.epsilon;

    param[i] -= cfg.eta * m_hat / denom;
  }

  if (decoupled) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      param[i] -= cfg.eta * cfg.weight_decay * pre_step[i];
    }
  }

  if (!all_finite(param)) {
    throw divergence_error("smes_step: non-finite parameter after step for " + std::string(label));
  }
}

void smes_step_group(std::span<Tensor* const> params, std::span<Tensor* const> grads,
                     std::span<SmesState> states, const SmesConfig& cfg) {
  if (params.size() != grads.size() || params.size() != states.size()) {
    std::ostringstream msg;
    msg << "smes_step_group: list sizes disagree: " << params.size() << " params, " << grads.size()
        << " grads, " << states.size() << " states";
    throw std::invalid_argument(msg.str());
  }
  if (cfg.clip_threshold) clip_global_norm(grads, *cfg.clip_threshold);
  for (std::size_t i = 0; i < params.size(); ++i) {
    smes_step(*params[i], *grads[i], states[i], cfg, "param " + std::to_string(i));
  }
}

SmesConfig preset(std::string_view name) {
  if (name == "sgd") {
    SmesConfig cfg;
    cfg.alpha = 0.0;
    cfg.eta = 0.1;
    cfg.weight_decay = 5e-4;
    cfg.decay_mode = DecayMode::coupled_l2;
    return cfg;
  }
  if (name == "adam") {
    SmesConfig cfg;
    cfg.alpha = 0.5;
    cfg.eta = 0.001;
    cfg.beta1 = 0.9;
    cfg.beta2 = 0.999;
    cfg.epsilon = 1e-8;
    cfg.weight_decay = 0.0;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "': expected sgd or adam");
}

namespace {

nlohmann::json state_json(const SmesState& state) {
  return nlohmann::json{
      {"shape", state.m.shape()},
      {"m", std::vector<double>(state.m.values().begin(), state.m.values().end())},
      {"v", std::vector<double>(state.v.values().begin(), state.v.values().end())},
      {"t", state.t},
  };
}

SmesState state_from(const nlohmann::json& j) {
  auto shape = j.at("shape").get<std::vector<std::size_t>>();
  SmesState state;
  state.m = Tensor(shape, j.at("m").get<std::vector<double>>());
  state.v = Tensor(std::move(shape), j.at("v").get<std::vector<double>>());
  state.t = j.at("t").get<std::uint64_t>();
  return state;
}

}  // namespace

std::string state_to_json(const SmesState& state) { return state_json(state).dump(); }

SmesState state_from_json(const std::string& text) {
  return state_from(nlohmann::json::parse(text));
}

void save_states(std::span<const SmesState> states, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const SmesState& s : states) out << state_to_json(s) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<SmesState> load_states(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<SmesState> states;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    states.push_back(state_from_json(line));
  }
  return states;
}

}  // namespace smes
