#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "textlier/nn/tensor.hpp"

namespace textlier::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Optimizer state for a fixed list of parameter tensors.
class AdamState {
 public:
  AdamState(AdamConfig config, std::span<const Tensor* const> params);

  const AdamConfig& config() const noexcept { return config_; }
  std::uint64_t step() const noexcept { return step_; }
  const std::vector<Tensor>& first_moment() const noexcept { return m_; }
  const std::vector<Tensor>& second_moment() const noexcept { return v_; }

 private:
  friend void adam_step(std::span<Tensor* const>, std::span<Tensor* const>, AdamState&);

  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

/// One bias-corrected Adam update. Throws TrainingError on a non-finite
/// gradient, before touching any parameter.
void adam_step(std::span<Tensor* const> params, std::span<Tensor* const> grads, AdamState& state);

}  // namespace textlier::nn
