#include "textlier/nn/sequential.hpp"

namespace textlier::nn {

Sequential::Sequential(const Sequential& other) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) {
    Sequential copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Tensor::Shape Sequential::output_shape(Tensor::Shape input) const {
  for (const auto& l : layers_) input = l->output_shape(input);
  return input;
}

Tensor Sequential::apply(const Tensor& input) const {
  Tensor x = input;
  for (const auto& l : layers_) x = l->apply(x);
  return x;
}

Tensor Sequential::forward(const Tensor& input) {
  Tensor x = input;
  for (auto& l : layers_) x = l->forward(x);
  return x;
}

Tensor Sequential::backward(const Tensor& upstream) {
  Tensor g = upstream;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

void Sequential::zero_grad() {
  for (auto& l : layers_) l->zero_grad();
}

std::vector<Tensor*> Sequential::parameters() {
  std::vector<Tensor*> out;
  for (auto& l : layers_)
    for (Tensor* p : l->parameters()) out.push_back(p);
  return out;
}

std::vector<const Tensor*> Sequential::parameters() const {
  std::vector<const Tensor*> out;
  for (const auto& l : layers_)
    for (const Tensor* p : static_cast<const Layer&>(*l).parameters()) out.push_back(p);
  return out;
}

std::vector<Tensor*> Sequential::gradients() {
  std::vector<Tensor*> out;
  for (auto& l : layers_)
    for (Tensor* g : l->gradients()) out.push_back(g);
  return out;
}

std::vector<std::string> Sequential::parameter_names(const std::string& prefix) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < layers_.size(); ++i)
    for (const auto& n : layers_[i]->parameter_names())
      out.push_back(prefix + "." + std::to_string(i) + "." + n);
  return out;
}

}  // namespace textlier::nn
