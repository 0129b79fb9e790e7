#include <random>

#include <benchmark/benchmark.h>

#include "textlier/autoencoder.hpp"
#include "textlier/baselines.hpp"
#include "textlier/corpus/embedder.hpp"
#include "textlier/linalg.hpp"
#include "textlier/random.hpp"

using namespace textlier;

namespace {

corpus::EmbeddedDocument random_document(std::size_t max_sent, std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 0.1);
  corpus::EmbeddedDocument d{"bench", 0, max_sent, nn::Tensor({max_sent, dim})};
  for (double& v : d.matrix.data()) v = g(rng);
  return d;
}

std::vector<std::vector<double>> random_vectors(std::size_t n, std::size_t d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(d));
  for (auto& v : out)
    for (double& x : v) x = g(rng);
  return out;
}

// Args: sentence rows, embedding dimension.
void BM_Featurize(benchmark::State& state) {
  Rng rng(4);
  ae::AEConfig c;
  c.max_sent = static_cast<std::size_t>(state.range(0));
  c.embed_dim = static_cast<std::size_t>(state.range(1));
  const auto model = ae::AutoencoderModel::build(c);
  const auto doc = random_document(c.max_sent, c.embed_dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(model.featurize(doc));
}
BENCHMARK(BM_Featurize)->Args({8, 16})->Args({32, 768})->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  Rng rng(5);
  ae::AEConfig c;
  c.max_sent = 8;
  c.embed_dim = 16;
  c.latent_dim = 8;
  c.epochs = 1;
  c.batch_size = 8;
  std::vector<corpus::EmbeddedDocument> docs;
  for (int i = 0; i < 64; ++i) docs.push_back(random_document(8, 16, rng));
  for (auto _ : state) benchmark::DoNotOptimize(ae::train_autoencoder(docs, c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

void BM_HashEmbed(benchmark::State& state) {
  const std::string sentence = "the quick brown fox jumps over the lazy dog near the river bank";
  for (auto _ : state) benchmark::DoNotOptimize(corpus::hash_embed(sentence, 768));
}
BENCHMARK(BM_HashEmbed);

void BM_JacobiEigen(benchmark::State& state) {
  Rng rng(6);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto data = random_vectors(4 * d, d, rng);
  const auto cov = linalg::covariance_of(data, linalg::mean_of(data));
  for (auto _ : state) benchmark::DoNotOptimize(linalg::jacobi_eigen(cov));
}
BENCHMARK(BM_JacobiEigen)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MahalanobisScore(benchmark::State& state) {
  Rng rng(7);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto data = random_vectors(4 * d, d, rng);
  const auto model = baselines::fit_gaussian(data, 1e-6);
  for (auto _ : state)
    for (const auto& v : data) benchmark::DoNotOptimize(baselines::mahalanobis_sq(model, v));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_MahalanobisScore)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
