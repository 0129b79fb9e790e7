#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textlier/nn/tensor.hpp"
#include "textlier/random.hpp"

namespace textlier::nn {

/// A differentiable stage in a feed-forward stack.
///
/// `apply` is a pure inference path and may be called concurrently on a shared
/// layer. `forward` additionally caches its input so that a following
/// `backward` can compute gradients; `backward` accumulates into the layer's
/// gradient buffers (call zero_grad() between optimizer steps) and returns the
/// gradient with respect to the forward input.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string_view kind() const noexcept = 0;
  /// Throws ShapeError if the layer cannot accept `input`.
  virtual Tensor::Shape output_shape(const Tensor::Shape& input) const = 0;
  virtual Tensor apply(const Tensor& input) const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;

  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& upstream);

  /// Parameters and gradients are index-aligned and shape-congruent.
  virtual std::vector<Tensor*> parameters() { return {}; }
  virtual std::vector<const Tensor*> parameters() const { return {}; }
  virtual std::vector<Tensor*> gradients() { return {}; }
  virtual std::vector<std::string> parameter_names() const { return {}; }

  void zero_grad();
  void clear_cache() noexcept { cached_input_.reset(); }

 protected:
  virtual Tensor backward_impl(const Tensor& input, const Tensor& upstream) = 0;

 private:
  std::optional<Tensor> cached_input_;
};

struct ConvSpec {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel_h = 3;
  std::size_t kernel_w = 3;
  std::size_t stride = 1;
  std::size_t padding = 0;
};

/// Output extent of a strided, zero-padded convolution along one axis, or 0
/// if the kernel does not fit.
std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding) noexcept;

/// 2-D cross-correlation over (channels, rows, columns) with zero padding.
class Conv2D final : public Layer {
 public:
  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), bias zero.
  Conv2D(const ConvSpec& spec, Rng& rng);
  Conv2D(const ConvSpec& spec, Tensor weight, Tensor bias);

  std::string_view kind() const noexcept override { return "conv2d"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv2D>(*this); }

  std::vector<Tensor*> parameters() override { return {&weight_, &bias_}; }
  std::vector<const Tensor*> parameters() const override { return {&weight_, &bias_}; }
  std::vector<Tensor*> gradients() override { return {&weight_grad_, &bias_grad_}; }
  std::vector<std::string> parameter_names() const override { return {"weight", "bias"}; }

  const ConvSpec& spec() const noexcept { return spec_; }
  const Tensor& weight() const noexcept { return weight_; }
  const Tensor& bias() const noexcept { return bias_; }
  const Tensor& weight_grad() const noexcept { return weight_grad_; }
  const Tensor& bias_grad() const noexcept { return bias_grad_; }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;

 private:
  ConvSpec spec_;
  Tensor weight_;
  Tensor bias_;
  Tensor weight_grad_;
  Tensor bias_grad_;
};

/// Affine map on a rank-1 input: weight * x + bias.
class Dense final : public Layer {
 public:
  Dense(std::size_t in_dim, std::size_t out_dim, Rng& rng);
  Dense(Tensor weight, Tensor bias);

  std::string_view kind() const noexcept override { return "dense"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dense>(*this); }

  std::vector<Tensor*> parameters() override { return {&weight_, &bias_}; }
  std::vector<const Tensor*> parameters() const override { return {&weight_, &bias_}; }
  std::vector<Tensor*> gradients() override { return {&weight_grad_, &bias_grad_}; }
  std::vector<std::string> parameter_names() const override { return {"weight", "bias"}; }

  std::size_t in_dim() const noexcept { return weight_.dim(1); }
  std::size_t out_dim() const noexcept { return weight_.dim(0); }
  const Tensor& weight() const noexcept { return weight_; }
  const Tensor& bias() const noexcept { return bias_; }
  const Tensor& weight_grad() const noexcept { return weight_grad_; }
  const Tensor& bias_grad() const noexcept { return bias_grad_; }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;

 private:
  Tensor weight_;
  Tensor bias_;
  Tensor weight_grad_;
  Tensor bias_grad_;
};

class Relu final : public Layer {
 public:
  std::string_view kind() const noexcept override { return "relu"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override { return input; }
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Relu>(*this); }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;
};

/// Nearest-neighbour 2x upsampling of a (C, H, W) tensor to (C, 2H, 2W).
class Upsample2x final : public Layer {
 public:
  std::string_view kind() const noexcept override { return "upsample2x"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Upsample2x>(*this); }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;
};

/// Reinterprets the input with a new shape of equal element count.
class Reshape final : public Layer {
 public:
  explicit Reshape(Tensor::Shape target) : target_(std::move(target)) {}

  std::string_view kind() const noexcept override { return "reshape"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Reshape>(*this); }

  const Tensor::Shape& target() const noexcept { return target_; }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;

 private:
  Tensor::Shape target_;
};

/// Keeps the top-left (rows, cols) window of every channel of a (C, H, W) tensor.
class Crop2D final : public Layer {
 public:
  Crop2D(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::string_view kind() const noexcept override { return "crop2d"; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  Tensor apply(const Tensor& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Crop2D>(*this); }

 protected:
  Tensor backward_impl(const Tensor& input, const Tensor& upstream) override;

 private:
  std::size_t rows_;
  std::size_t cols_;
};

/// Glorot-uniform initialisation used by every parameterised layer.
Tensor glorot_uniform(Tensor::Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace textlier::nn
