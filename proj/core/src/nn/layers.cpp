#include "textlier/nn/layers.hpp"

#include <cmath>

#include "textlier/error.hpp"

namespace textlier::nn {

Tensor Layer::forward(const Tensor& input) {
  Tensor out = apply(input);
  cached_input_ = input;
  return out;
}

Tensor Layer::backward(const Tensor& upstream) {
  if (!cached_input_)
    throw StateError(std::string(kind()) + ": backward called before forward");
  require_shape(upstream, output_shape(cached_input_->shape()),
                (std::string(kind()) + " backward upstream").c_str());
  return backward_impl(*cached_input_, upstream);
}

void Layer::zero_grad() {
  for (Tensor* g : gradients()) g->fill(0.0);
}

Tensor glorot_uniform(Tensor::Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = dist(rng);
  return t;
}

std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding) noexcept {
  if (stride == 0 || in + 2 * padding < kernel) return 0;
  return (in + 2 * padding - kernel) / stride + 1;
}

namespace {

void validate_spec(const ConvSpec& s) {
  if (s.in_channels == 0 || s.out_channels == 0 || s.kernel_h == 0 || s.kernel_w == 0 ||
      s.stride == 0)
    throw ArgumentError("conv2d: channels, kernel extents and stride must be positive");
}

}  // namespace

// ---------------------------------------------------------------- Conv2D

Conv2D::Conv2D(const ConvSpec& spec, Rng& rng) : spec_(spec) {
  validate_spec(spec_);
  const std::size_t area = spec_.kernel_h * spec_.kernel_w;
  weight_ = glorot_uniform({spec_.out_channels, spec_.in_channels, spec_.kernel_h, spec_.kernel_w},
                           spec_.in_channels * area, spec_.out_channels * area, rng);
  bias_ = Tensor({spec_.out_channels});
  weight_grad_ = Tensor(weight_.shape());
  bias_grad_ = Tensor(bias_.shape());
}

Conv2D::Conv2D(const ConvSpec& spec, Tensor weight, Tensor bias)
    : spec_(spec), weight_(std::move(weight)), bias_(std::move(bias)) {
  validate_spec(spec_);
  require_shape(weight_, {spec_.out_channels, spec_.in_channels, spec_.kernel_h, spec_.kernel_w},
                "conv2d weight");
  require_shape(bias_, {spec_.out_channels}, "conv2d bias");
  weight_grad_ = Tensor(weight_.shape());
  bias_grad_ = Tensor(bias_.shape());
}

Tensor::Shape Conv2D::output_shape(const Tensor::Shape& input) const {
  if (input.size() != 3 || input[0] != spec_.in_channels)
    throw ShapeError("conv2d: expected input (" + std::to_string(spec_.in_channels) +
                     ", H, W), got " + to_string(input));
  const std::size_t oh = conv_output_extent(input[1], spec_.kernel_h, spec_.stride, spec_.padding);
  const std::size_t ow = conv_output_extent(input[2], spec_.kernel_w, spec_.stride, spec_.padding);
  if (oh == 0 || ow == 0)
    throw ShapeError("conv2d: kernel does not fit input " + to_string(input));
  return {spec_.out_channels, oh, ow};
}

// Loop order walks each kernel tap over the whole output plane so the inner
// loop runs along contiguous memory.
Tensor Conv2D::apply(const Tensor& input) const {
  const Tensor::Shape out_shape = output_shape(input.shape());
  require_finite(input, "conv2d");
  const std::size_t in_h = input.dim(1), in_w = input.dim(2);
  const std::size_t out_h = out_shape[1], out_w = out_shape[2];
  const auto pad = static_cast<std::ptrdiff_t>(spec_.padding);
  const auto stride = static_cast<std::ptrdiff_t>(spec_.stride);

  Tensor out(out_shape);
  for (std::size_t oc = 0; oc < spec_.out_channels; ++oc) {
    double* plane = &out.at(oc, 0, 0);
    for (std::size_t i = 0; i < out_h * out_w; ++i) plane[i] = bias_[oc];
    for (std::size_t ic = 0; ic < spec_.in_channels; ++ic) {
      for (std::size_t ky = 0; ky < spec_.kernel_h; ++ky) {
        for (std::size_t kx = 0; kx < spec_.kernel_w; ++kx) {
          const double w = weight_[((oc * spec_.in_channels + ic) * spec_.kernel_h + ky) *
                                       spec_.kernel_w + kx];
          if (w == 0.0) continue;
          for (std::size_t oy = 0; oy < out_h; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy) * stride - pad +
                                      static_cast<std::ptrdiff_t>(ky);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
            const double* in_row = &input.at(ic, static_cast<std::size_t>(iy), 0);
            double* out_row = plane + oy * out_w;
            for (std::size_t ox = 0; ox < out_w; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox) * stride - pad +
                                        static_cast<std::ptrdiff_t>(kx);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
              out_row[ox] += w * in_row[ix];
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor Conv2D::backward_impl(const Tensor& input, const Tensor& upstream) {
  const std::size_t in_h = input.dim(1), in_w = input.dim(2);
  const std::size_t out_h = upstream.dim(1), out_w = upstream.dim(2);
  const auto pad = static_cast<std::ptrdiff_t>(spec_.padding);
  const auto stride = static_cast<std::ptrdiff_t>(spec_.stride);

  Tensor grad_in(input.shape());
  for (std::size_t oc = 0; oc < spec_.out_channels; ++oc) {
    const double* up = &upstream.at(oc, 0, 0);
    double bias_sum = 0.0;
    for (std::size_t i = 0; i < out_h * out_w; ++i) bias_sum += up[i];
    bias_grad_[oc] += bias_sum;

    for (std::size_t ic = 0; ic < spec_.in_channels; ++ic) {
      for (std::size_t ky = 0; ky < spec_.kernel_h; ++ky) {
        for (std::size_t kx = 0; kx < spec_.kernel_w; ++kx) {
          const std::size_t widx =
              ((oc * spec_.in_channels + ic) * spec_.kernel_h + ky) * spec_.kernel_w + kx;
          const double w = weight_[widx];
          double wsum = 0.0;
          for (std::size_t oy = 0; oy < out_h; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy) * stride - pad +
                                      static_cast<std::ptrdiff_t>(ky);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
            const double* in_row = &input.at(ic, static_cast<std::size_t>(iy), 0);
            double* gin_row = &grad_in.at(ic, static_cast<std::size_t>(iy), 0);
            const double* up_row = up + oy * out_w;
            for (std::size_t ox = 0; ox < out_w; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox) * stride - pad +
                                        static_cast<std::ptrdiff_t>(kx);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
              wsum += up_row[ox] * in_row[ix];
              gin_row[ix] += w * up_row[ox];
            }
          }
          weight_grad_[widx] += wsum;
        }
      }
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
  if (in_dim == 0 || out_dim == 0) throw ArgumentError("dense: dimensions must be positive");
  weight_ = glorot_uniform({out_dim, in_dim}, in_dim, out_dim, rng);
  bias_ = Tensor({out_dim});
  weight_grad_ = Tensor(weight_.shape());
  bias_grad_ = Tensor(bias_.shape());
}

Dense::Dense(Tensor weight, Tensor bias) : weight_(std::move(weight)), bias_(std::move(bias)) {
  if (weight_.rank() != 2) throw ShapeError("dense weight must be rank 2, got " +
                                            to_string(weight_.shape()));
  require_shape(bias_, {weight_.dim(0)}, "dense bias");
  weight_grad_ = Tensor(weight_.shape());
  bias_grad_ = Tensor(bias_.shape());
}

Tensor::Shape Dense::output_shape(const Tensor::Shape& input) const {
  if (input != Tensor::Shape{in_dim()})
    throw ShapeError("dense: expected input (" + std::to_string(in_dim()) + "), got " +
                     to_string(input));
  return {out_dim()};
}

Tensor Dense::apply(const Tensor& input) const {
  Tensor out(output_shape(input.shape()));
  require_finite(input, "dense");
  const std::size_t n = in_dim();
  for (std::size_t o = 0; o < out_dim(); ++o) {
    const double* row = &weight_[o * n];
    double acc = bias_[o];
    for (std::size_t i = 0; i < n; ++i) acc += row[i] * input[i];
    out[o] = acc;
  }
  return out;
}

Tensor Dense::backward_impl(const Tensor& input, const Tensor& upstream) {
  const std::size_t n = in_dim();
  Tensor grad_in(input.shape());
  for (std::size_t o = 0; o < out_dim(); ++o) {
    const double g = upstream[o];
    bias_grad_[o] += g;
    const double* row = &weight_[o * n];
    double* grow = &weight_grad_[o * n];
    for (std::size_t i = 0; i < n; ++i) {
      grow[i] += g * input[i];
      grad_in[i] += g * row[i];
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------- Relu

Tensor Relu::apply(const Tensor& input) const {
  Tensor out = input;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor Relu::backward_impl(const Tensor& input, const Tensor& upstream) {
  Tensor grad = upstream;
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (!(input[i] > 0.0)) grad[i] = 0.0;
  return grad;
}

// ---------------------------------------------------------------- Upsample2x

Tensor::Shape Upsample2x::output_shape(const Tensor::Shape& input) const {
  if (input.size() != 3) throw ShapeError("upsample2x: expected (C, H, W), got " + to_string(input));
  return {input[0], 2 * input[1], 2 * input[2]};
}

Tensor Upsample2x::apply(const Tensor& input) const {
  Tensor out(output_shape(input.shape()));
  for (std::size_t c = 0; c < out.dim(0); ++c)
    for (std::size_t y = 0; y < out.dim(1); ++y)
      for (std::size_t x = 0; x < out.dim(2); ++x) out.at(c, y, x) = input.at(c, y / 2, x / 2);
  return out;
}

Tensor Upsample2x::backward_impl(const Tensor& input, const Tensor& upstream) {
  Tensor grad(input.shape());
  for (std::size_t c = 0; c < upstream.dim(0); ++c)
    for (std::size_t y = 0; y < upstream.dim(1); ++y)
      for (std::size_t x = 0; x < upstream.dim(2); ++x)
        grad.at(c, y / 2, x / 2) += upstream.at(c, y, x);
  return grad;
}

// ---------------------------------------------------------------- Reshape

Tensor::Shape Reshape::output_shape(const Tensor::Shape& input) const {
  if (element_count(input) != element_count(target_))
    throw ShapeError("reshape: cannot view " + to_string(input) + " as " + to_string(target_));
  return target_;
}

Tensor Reshape::apply(const Tensor& input) const {
  output_shape(input.shape());
  return input.reshaped(target_);
}

Tensor Reshape::backward_impl(const Tensor& input, const Tensor& upstream) {
  return upstream.reshaped(input.shape());
}

// ---------------------------------------------------------------- Crop2D

Tensor::Shape Crop2D::output_shape(const Tensor::Shape& input) const {
  if (input.size() != 3 || input[1] < rows_ || input[2] < cols_)
    throw ShapeError("crop2d: cannot crop " + to_string(input) + " to " + std::to_string(rows_) +
                     "x" + std::to_string(cols_));
  return {input[0], rows_, cols_};
}

Tensor Crop2D::apply(const Tensor& input) const {
  Tensor out(output_shape(input.shape()));
  for (std::size_t c = 0; c < out.dim(0); ++c)
    for (std::size_t y = 0; y < rows_; ++y)
      for (std::size_t x = 0; x < cols_; ++x) out.at(c, y, x) = input.at(c, y, x);
  return out;
}

Tensor Crop2D::backward_impl(const Tensor& input, const Tensor& upstream) {
  Tensor grad(input.shape());
  for (std::size_t c = 0; c < upstream.dim(0); ++c)
    for (std::size_t y = 0; y < rows_; ++y)
      for (std::size_t x = 0; x < cols_; ++x) grad.at(c, y, x) = upstream.at(c, y, x);
  return grad;
}

}  // namespace textlier::nn
