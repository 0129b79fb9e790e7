#include "textlier/nn/adam.hpp"

#include <cmath>

#include "textlier/error.hpp"

namespace textlier::nn {

AdamState::AdamState(AdamConfig config, std::span<const Tensor* const> params) : config_(config) {
  if (!(config_.learning_rate > 0 && config_.beta1 > 0 && config_.beta1 < 1 &&
        config_.beta2 > 0 && config_.beta2 < 1 && config_.epsilon > 0))
    throw ArgumentError("adam: learning rate and epsilon must be positive, betas in (0, 1)");
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Tensor* p : params) {
    m_.emplace_back(p->shape());
    v_.emplace_back(p->shape());
  }
}

void adam_step(std::span<Tensor* const> params, std::span<Tensor* const> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m_.size())
    throw ShapeError("adam_step: parameter, gradient and state counts differ");
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_shape(*grads[i], params[i]->shape(), "adam_step gradient");
    require_shape(state.m_[i], params[i]->shape(), "adam_step state");
    if (!grads[i]->all_finite())
      throw TrainingError("adam_step: non-finite gradient at step " +
                          std::to_string(state.step_ + 1));
  }

  const AdamConfig& c = state.config_;
  ++state.step_;
  const auto t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i]->data();
    auto g = grads[i]->data();
    auto m = state.m_[i].data();
    auto v = state.v_[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace textlier::nn
