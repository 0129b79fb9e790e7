#pragma once

#include "textlier/nn/layers.hpp"
#include "textlier/nn/tensor.hpp"

namespace textlier::test {

/// Direct gather form: every output cell sums its own receptive field.
inline nn::Tensor reference_conv(const nn::Tensor& input, const nn::Tensor& weight,
                                 const nn::Tensor& bias, std::size_t stride,
                                 std::size_t padding) {
  const std::size_t in_c = input.dim(0), in_h = input.dim(1), in_w = input.dim(2);
  const std::size_t out_c = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
  const std::size_t out_h = (in_h + 2 * padding - kh) / stride + 1;
  const std::size_t out_w = (in_w + 2 * padding - kw) / stride + 1;
  nn::Tensor out({out_c, out_h, out_w});
  for (std::size_t o = 0; o < out_c; ++o)
    for (std::size_t y = 0; y < out_h; ++y)
      for (std::size_t x = 0; x < out_w; ++x) {
        double acc = bias[o];
        for (std::size_t c = 0; c < in_c; ++c)
          for (std::size_t i = 0; i < kh; ++i)
            for (std::size_t j = 0; j < kw; ++j) {
              const long r = static_cast<long>(y * stride + i) - static_cast<long>(padding);
              const long s = static_cast<long>(x * stride + j) - static_cast<long>(padding);
              if (r < 0 || s < 0 || r >= static_cast<long>(in_h) || s >= static_cast<long>(in_w))
                continue;
              acc += weight[((o * in_c + c) * kh + i) * kw + j] *
                     input.at(c, static_cast<std::size_t>(r), static_cast<std::size_t>(s));
            }
        out.at(o, y, x) = acc;
      }
  return out;
}

}  // namespace textlier::test
