#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smes/tensor.hpp"

namespace smes {

/// How the weight-decay term enters the update. coupled_l2 folds
/// weight_decay * param into the gradient before the moment accumulators
/// see it (the classic SGD/Adam L2 behavior, the default); decoupled
/// shrinks the parameter directly alongside the step; none disables decay
/// regardless of the weight_decay value.
enum class DecayMode { coupled_l2, decoupled, none };

std::string to_string(DecayMode m);
DecayMode decay_mode_from_string(const std::string& name);

/// Hyperparameters of the second-moment exponential-scaling update
///
///   theta <- theta - eta * m_hat / (v_hat^alpha + epsilon)
///
/// where m_hat, v_hat are the bias-corrected first and second moments.
/// The balance coefficient alpha selects the optimizer family: 0 gives an
/// SGD-shaped step (the second moment is inert), 0.5 gives Adam, negative
/// values scale steps *up* where gradient history is large and *down*
/// where it is small.
///
/// epsilon is added after exponentiation, exactly as the update is
/// written above. For alpha < 0, v_hat^alpha diverges as v_hat -> 0, so
/// v_hat is floored at v_floor before exponentiation; parameters with
/// near-zero gradient history then receive near-zero steps.
struct SmesConfig {
  double eta = 0.001;        // learning rate
  double beta1 = 0.9;        // first-moment decay
  double beta2 = 0.999;      // second-moment decay
  double epsilon = 1e-8;
  double alpha = 0.5;        // balance coefficient
  double weight_decay = 0.0;
  DecayMode decay_mode = DecayMode::coupled_l2;
  std::optional<double> clip_threshold;  // global-norm clip, applied pre-moment
  double v_floor = 1e-12;    // second-moment floor, used only when alpha < 0

  /// Throws std::invalid_argument on out-of-range fields. epsilon = 0 is
  /// accepted (it makes the alpha = 0 limit exact); callers relying on
  /// denominators staying positive for alpha > 0 should keep epsilon > 0.
  void validate() const;
};

/// Per-parameter moment accumulators. m and v start at zero and t at 0;
/// t increments by exactly 1 per step. v stays elementwise >= 0. One state
/// belongs to exactly one parameter's update path.
struct SmesState {
  Tensor m;
  Tensor v;
  std::uint64_t t = 0;
};

SmesState smes_init(std::vector<std::size_t> param_shape);

/// Thrown when a non-finite gradient is fed in or a step produces a
/// non-finite parameter; callers may treat it as a divergence signal.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Scales all gradients by threshold/norm when their joint L2 norm exceeds
/// threshold, leaving them untouched otherwise. threshold must be > 0.
void clip_global_norm(std::span<Tensor* const> grads, double threshold);
std::vector<Tensor> clip_global_norm(std::vector<Tensor> grads, double threshold);

/// One update. In order: coupled weight decay into the effective gradient;
/// t += 1; moment EMAs; bias correction; denom = v_hat^alpha + epsilon
/// (v_hat floored at v_floor first when alpha < 0; 0^alpha is 0 for
/// alpha > 0 and 1 for alpha = 0); parameter step; then decoupled decay
/// against the pre-step parameter if selected. Throws divergence_error on
/// non-finite input or output, naming `label`.
void smes_step(Tensor& param, const Tensor& grad, SmesState& state, const SmesConfig& cfg,
               std::string_view label = "param");

/// Whole-model step: clips jointly (when configured) then steps each
/// (param, grad, state) triple. Gradients are clipped in place.
void smes_step_group(std::span<Tensor* const> params, std::span<Tensor* const> grads,
                     std::span<SmesState> states, const SmesConfig& cfg);

/// Named presets: "sgd" is the alpha = 0 limit with the classic protocol
/// defaults (eta 0.1, weight decay 5e-4 coupled); "adam" is alpha = 0.5
/// with (beta1, beta2, epsilon) = (0.9, 0.999, 1e-8) and eta 0.001.
SmesConfig preset(std::string_view name);

/// State serialization in the run-record line format: a single JSON object
/// {"shape": [...], "m": [...], "v": [...], "t": n} per state, one per
/// line in the file forms. Doubles round-trip exactly, so a restored state
/// continues a trajectory bitwise.
std::string state_to_json(const SmesState& state);
SmesState state_from_json(const std::string& text);
void save_states(std::span<const SmesState> states, const std::string& path);
std::vector<SmesState> load_states(const std::string& path);

}  // namespace smes
