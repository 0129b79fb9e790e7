#pragma once

#include <memory>
#include <string>
#include <vector>

#include "textlier/nn/layers.hpp"

namespace textlier::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Ordered layer stack with deep-copy value semantics.
class Sequential {
 public:
  Sequential() = default;
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;

  template <typename L, typename... Args>
  L& emplace(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }

  std::size_t size() const noexcept { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }

  Tensor::Shape output_shape(Tensor::Shape input) const;
  Tensor apply(const Tensor& input) const;
  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& upstream);
  void zero_grad();

  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
  std::vector<Tensor*> gradients();
  /// Names are "<prefix>.<layer index>.<parameter name>".
  std::vector<std::string> parameter_names(const std::string& prefix) const;

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace textlier::nn
