#include "textlier/nn/loss.hpp"

#include "textlier/error.hpp"

namespace textlier::nn {

LossResult mse_loss(const Tensor& prediction, const Tensor& target) {
  require_shape(target, prediction.shape(), "mse_loss target");
  const auto n = static_cast<double>(prediction.size());
  LossResult result{0.0, Tensor(prediction.shape())};
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double diff = prediction[i] - target[i];
    result.loss += diff * diff;
    result.gradient[i] = 2.0 * diff / n;
  }
  result.loss /= n;
  return result;
}

LossResult masked_mse_loss(const Tensor& prediction, const Tensor& target,
                           std::size_t valid_rows) {
  require_shape(target, prediction.shape(), "masked_mse_loss target");
  if (prediction.rank() != 3) throw ShapeError("masked_mse_loss expects a (C, H, W) tensor");
  const std::size_t channels = prediction.dim(0), rows = prediction.dim(1),
                    cols = prediction.dim(2);
  if (valid_rows == 0 || valid_rows > rows)
    throw ArgumentError("masked_mse_loss: valid_rows must be in [1, " + std::to_string(rows) + "]");
  const auto n = static_cast<double>(channels * valid_rows * cols);
  LossResult result{0.0, Tensor(prediction.shape())};
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t y = 0; y < valid_rows; ++y)
      for (std::size_t x = 0; x < cols; ++x) {
        const double diff = prediction.at(c, y, x) - target.at(c, y, x);
        result.loss += diff * diff;
        result.gradient.at(c, y, x) = 2.0 * diff / n;
      }
  result.loss /= n;
  return result;
}

}  // namespace textlier::nn
