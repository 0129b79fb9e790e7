#pragma once

#include <cstddef>

#include "textlier/nn/tensor.hpp"

namespace textlier::nn {

struct LossResult {
  double loss = 0.0;
  Tensor gradient;  // d loss / d prediction
};

/// Mean squared error over every element: sum((p - t)^2) / N.
LossResult mse_loss(const Tensor& prediction, const Tensor& target);

/// Mean squared error over the first `valid_rows` rows of each (C, H, W)
/// channel. Rows at or beyond `valid_rows` contribute neither loss nor gradient.
LossResult masked_mse_loss(const Tensor& prediction, const Tensor& target, std::size_t valid_rows);

}  // namespace textlier::nn
