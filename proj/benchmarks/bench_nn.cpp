#include <random>

#include <benchmark/benchmark.h>

#include "textlier/nn/layers.hpp"
#include "textlier/random.hpp"

using namespace textlier;
using nn::Tensor;

namespace {

Tensor filled(Tensor::Shape shape, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = u(rng);
  return t;
}

// Args: input channels, output channels, rows, columns.
void BM_Conv2DForward(benchmark::State& state) {
  Rng rng(1);
  const auto cin = static_cast<std::size_t>(state.range(0));
  const auto cout = static_cast<std::size_t>(state.range(1));
  nn::Conv2D conv({cin, cout, 3, 3, 2, 1}, rng);
  const Tensor x = filled({cin, static_cast<std::size_t>(state.range(2)),
                          static_cast<std::size_t>(state.range(3))}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv.apply(x));
}
BENCHMARK(BM_Conv2DForward)->Args({1, 8, 32, 768})->Args({8, 16, 16, 384})->Args({16, 32, 8, 192});

void BM_Conv2DBackward(benchmark::State& state) {
  Rng rng(2);
  const auto cin = static_cast<std::size_t>(state.range(0));
  const auto cout = static_cast<std::size_t>(state.range(1));
  nn::Conv2D conv({cin, cout, 3, 3, 2, 1}, rng);
  const Tensor x = filled({cin, static_cast<std::size_t>(state.range(2)),
                          static_cast<std::size_t>(state.range(3))}, rng);
  const Tensor up = filled(conv.output_shape(x.shape()), rng);
  for (auto _ : state) {
    conv.zero_grad();
    conv.forward(x);
    benchmark::DoNotOptimize(conv.backward(up));
  }
}
BENCHMARK(BM_Conv2DBackward)->Args({1, 8, 32, 768})->Args({16, 32, 8, 192});

void BM_DenseForward(benchmark::State& state) {
  Rng rng(3);
  const auto in = static_cast<std::size_t>(state.range(0));
  nn::Dense dense(in, 32, rng);
  const Tensor x = filled({in}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dense.apply(x));
}
BENCHMARK(BM_DenseForward)->Arg(256)->Arg(3072);

}  // namespace
