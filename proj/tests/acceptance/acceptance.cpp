// Acceptance checks for the toolkit. Prints one PASS/FAIL line per criterion
// and exits nonzero if any criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "textlier/autoencoder.hpp"
#include "textlier/baselines.hpp"
#include "textlier/classifier.hpp"
#include "textlier/cli/commands.hpp"
#include "textlier/corpus/io.hpp"
#include "textlier/eval.hpp"
#include "textlier/linalg.hpp"
#include "textlier/nn/layers.hpp"
#include "textlier/nn/loss.hpp"
#include "textlier_test/finite_diff.hpp"
#include "textlier_test/reference_conv.hpp"
#include "textlier_test/scratch_dir.hpp"
#include "textlier_test/synthetic.hpp"

using namespace textlier;
using nn::Tensor;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kMetricTol = 1e-6;
constexpr double kLayerGradTol = 1e-3;
constexpr double kObjectiveGradTol = 1e-5;
constexpr int kGradSeeds = 20;
constexpr double kConvTol = 1e-9;
constexpr int kConvConfigs = 100;
constexpr double kOverfitMse = 1e-2;
constexpr double kInverseTol = 1e-8;
constexpr double kTraceTol = 1e-8;
constexpr double kDeterminantTol = 1e-6;
constexpr double kPipelineF1 = 0.9;
constexpr double kBaselinePercentile = 95.0;
constexpr std::size_t kRoundTripDocs = 1000;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

Tensor random_tensor(Tensor::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = u(rng);
  return t;
}

Eigen::MatrixXd to_eigen(const linalg::Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

linalg::Matrix random_spd(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(d, d, [&] { return g(rng); });
  const Eigen::MatrixXd s = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
  linalg::Matrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = s(r, c);
  return m;
}

// ---------------------------------------------------------------- criteria

Outcome table_metrics() {
  const auto r = eval::metrics({2284, 82, 206, 918});
  Outcome o;
  o.ok = std::abs(r.precision - 0.918) <= kMetricTol && std::abs(r.recall - 0.816725979) <= kMetricTol &&
         std::abs(r.f1 - 0.86440678) <= kMetricTol && r.n_samples == 3490;
  o.detail = "P=" + fmt(r.precision, 9) + " R=" + fmt(r.recall, 9) + " F1=" + fmt(r.f1, 9) +
             " n=" + std::to_string(r.n_samples);
  return o;
}

Outcome gradient_suite() {
  double conv = 0, dense = 0, relu = 0, up = 0, mse = 0, logistic = 0;
  for (int s = 0; s < kGradSeeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    {
      Rng rng(seed);
      nn::Conv2D layer({2, 3, 3, 2, 1 + seed % 2, seed % 3 == 0 ? 0u : 1u}, rng);
      const Tensor x = random_tensor({2, 5, 4}, rng);
      conv = std::max(conv, test::check_layer(layer, x, random_tensor(layer.output_shape(x.shape()), rng)).worst());
    }
    {
      Rng rng(100 + seed);
      nn::Dense layer(6, 4, rng);
      dense = std::max(dense, test::check_layer(layer, random_tensor({6}, rng), random_tensor({4}, rng)).worst());
    }
    {
      Rng rng(200 + seed);
      Tensor x = random_tensor({2, 3, 4}, rng);
      for (double& v : x.data())
        if (std::abs(v) < 1e-2) v = v < 0 ? -0.05 : 0.05;
      nn::Relu layer;
      relu = std::max(relu, test::check_layer(layer, x, random_tensor({2, 3, 4}, rng)).worst());
    }
    {
      Rng rng(300 + seed);
      nn::Upsample2x layer;
      up = std::max(up, test::check_layer(layer, random_tensor({2, 3, 2}, rng), random_tensor({2, 6, 4}, rng)).worst());
    }
    {
      Rng rng(400 + seed);
      Tensor p = random_tensor({2, 3, 4}, rng);
      const Tensor t = random_tensor({2, 3, 4}, rng);
      const auto num = test::numeric_gradient([&] { return nn::mse_loss(p, t).loss; }, p.data());
      mse = std::max(mse, test::max_relative_error(nn::mse_loss(p, t).gradient.data(), num));
    }
    {
      Rng rng(500 + seed);
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<std::vector<double>> rows(12, std::vector<double>(5));
      std::vector<int> labels(12);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (double& v : rows[i]) v = g(rng);
        labels[i] = static_cast<int>(i % 2);
      }
      std::vector<double> w(5);
      for (double& v : w) v = g(rng);
      double b = g(rng);
      const double lambda = 0.01 * (s + 1);
      const auto obj = classifier::logistic_objective(w, b, rows, labels, lambda);
      auto f = [&] { return classifier::logistic_objective(w, b, rows, labels, lambda).loss; };
      logistic = std::max(logistic, test::max_relative_error(obj.weight_grad, test::numeric_gradient(f, w)));
      logistic = std::max(logistic, test::relative_error(obj.bias_grad,
                                                         test::numeric_gradient(f, std::span<double>(&b, 1))[0]));
    }
  }
  Outcome o;
  o.ok = std::max({conv, dense, relu, up}) < kLayerGradTol && std::max(mse, logistic) < kObjectiveGradTol;
  o.detail = "seeds=" + std::to_string(kGradSeeds) + " conv=" + fmt(conv, 3) + " dense=" + fmt(dense, 3) +
             " relu=" + fmt(relu, 3) + " upsample=" + fmt(up, 3) + " mse=" + fmt(mse, 3) +
             " logistic=" + fmt(logistic, 3);
  return o;
}

Outcome conv_oracle() {
  Rng rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 8), small(1, 4), pad(0, 2), stride(1, 3);
  double worst = 0.0;
  int checked = 0;
  while (checked < kConvConfigs) {
    nn::ConvSpec s{small(rng), small(rng), small(rng), small(rng), stride(rng), pad(rng)};
    const std::size_t h = dim(rng), w = dim(rng);
    if (nn::conv_output_extent(h, s.kernel_h, s.stride, s.padding) == 0 ||
        nn::conv_output_extent(w, s.kernel_w, s.stride, s.padding) == 0)
      continue;
    nn::Conv2D conv(s, random_tensor({s.out_channels, s.in_channels, s.kernel_h, s.kernel_w}, rng),
                    random_tensor({s.out_channels}, rng));
    const Tensor x = random_tensor({s.in_channels, h, w}, rng);
    const Tensor got = conv.apply(x);
    const Tensor want = test::reference_conv(x, conv.weight(), conv.bias(), s.stride, s.padding);
    if (got.shape() != want.shape()) return {false, "shape mismatch at config " + std::to_string(checked)};
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    ++checked;
  }
  return {worst <= kConvTol, "configs=" + std::to_string(checked) + " max_abs_diff=" + fmt(worst, 3)};
}

Outcome ae_overfit() {
  test::SyntheticSpec spec;
  spec.n_normal = 8;
  spec.n_outlier = 0;
  spec.seed = 11;
  const auto docs = test::embed_synthetic(test::make_synthetic(spec), 8);
  ae::AEConfig c;
  c.max_sent = 8;
  c.embed_dim = 16;
  c.latent_dim = 8;
  c.epochs = 500;
  c.batch_size = 1;
  c.seed = 3;
  const auto m = ae::train_autoencoder(docs, c);
  double sum = 0.0;
  for (const auto& d : docs) sum += m.reconstruct(d).recon_error;
  const double mean = sum / static_cast<double>(docs.size());
  return {mean < kOverfitMse, "docs=8 epochs=500 mean_mse=" + fmt(mean, 4)};
}

Outcome baseline_correctness() {
  Rng rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  double inverse_err = 0.0, trace_err = 0.0, det_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 8;
    const linalg::Matrix cov = random_spd(d, rng);
    baselines::GaussianModel m;
    m.mean.resize(d);
    for (double& v : m.mean) v = g(rng);
    m.covariance = cov;
    m.cholesky_factor = linalg::cholesky(cov);
    std::vector<double> x(d);
    for (double& v : x) v = g(rng);
    Eigen::VectorXd diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - m.mean[i];
    const double want = diff.dot(to_eigen(cov).inverse() * diff);
    inverse_err = std::max(inverse_err, std::abs(baselines::mahalanobis_sq(m, x) - want) / std::max(1.0, want));
  }
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 12;
    const linalg::Matrix a = random_spd(d, rng);
    const auto e = linalg::jacobi_eigen(a);
    const Eigen::MatrixXd ea = to_eigen(a);
    const double sum = std::accumulate(e.values.begin(), e.values.end(), 0.0);
    const double prod = std::accumulate(e.values.begin(), e.values.end(), 1.0, std::multiplies<>());
    trace_err = std::max(trace_err, std::abs(sum - ea.trace()) / std::max(1.0, std::abs(ea.trace())));
    det_err = std::max(det_err, std::abs(prod / ea.determinant() - 1.0));
  }

  // Rank-2 signal plus noise of sigma 0.1 in five dimensions; ten points move
  // 10 sigma off the signal subspace.
  const std::size_t d = 5, n = 500, planted = 10;
  const double sigma = 0.1;
  Rng prng(8);
  const Eigen::MatrixXd mix = Eigen::MatrixXd::NullaryExpr(d, 2, [&] { return g(prng); });
  Eigen::VectorXd off = Eigen::VectorXd::NullaryExpr(d, [&] { return g(prng); });
  const Eigen::MatrixXd q = mix.householderQr().householderQ() * Eigen::MatrixXd::Identity(d, 2);
  off -= q * (q.transpose() * off);
  off.normalize();
  std::vector<std::vector<double>> data(n, std::vector<double>(d));
  for (auto& v : data) {
    const Eigen::VectorXd p = mix * Eigen::Vector2d(g(prng), g(prng)) +
                              sigma * Eigen::VectorXd::NullaryExpr(d, [&] { return g(prng); });
    for (std::size_t i = 0; i < d; ++i) v[i] = p[i];
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), prng);
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + planted);
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t i : chosen)
    for (std::size_t c = 0; c < d; ++c) data[i][c] += 10.0 * sigma * off[c];

  bool ranked = true;
  const std::vector<baselines::BaselineModel> models{baselines::fit_gaussian(data, 1e-6),
                                                     baselines::fit_pca(data, 2)};
  for (const auto& model : models) {
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i)
      scores[i] = std::holds_alternative<baselines::GaussianModel>(model)
                      ? baselines::mahalanobis_sq(std::get<baselines::GaussianModel>(model), data[i])
                      : baselines::pca_recon_error(std::get<baselines::PCAModel>(model), data[i]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<std::size_t> top(order.begin(), order.begin() + planted);
    std::sort(top.begin(), top.end());
    ranked = ranked && top == chosen;
  }
  return {inverse_err <= kInverseTol && trace_err <= kTraceTol && det_err <= kDeterminantTol && ranked,
          "inverse=" + fmt(inverse_err, 3) + " trace=" + fmt(trace_err, 3) + " det=" + fmt(det_err, 3) +
              " planted_top10=" + (ranked ? "yes" : "no")};
}

// Full synthetic pipeline driven through the command layer.
struct PipelineRun {
  double f1 = 0.0;
  double mahalanobis_f1 = 0.0;
  double pca_f1 = 0.0;
  std::string checkpoint;
  std::string report;
};

PipelineRun run_pipeline(const fs::path& dir) {
  test::SyntheticSpec spec;
  spec.n_normal = 1000;
  spec.n_outlier = 100;
  test::write_synthetic(test::make_synthetic(spec), dir);

  std::ostringstream log;
  cli::RunConfig config;
  config.out_dir = dir;
  config.n_inject = spec.n_outlier;
  config.baseline_percentile = kBaselinePercentile;
  cli::cmd_inject(config, dir / "normal.jsonl", dir / "outliers.jsonl", dir / "corpus.jsonl", log);

  config.provider = "file";
  config.max_sent = 8;
  const std::vector<fs::path> inputs{dir / "corpus.jsonl"};
  cli::cmd_embed(config, inputs, dir / "vectors.jsonl", dir / "embeddings.jsonl", log);
  cli::cmd_split(config, dir / "embeddings.jsonl", dir / "split.json", log);
  cli::cmd_train(config, dir / "embeddings.jsonl", dir / "checkpoint.txt", log);

  PipelineRun run;
  run.f1 = cli::cmd_eval(config, dir / "checkpoint.txt", dir / "embeddings.jsonl", dir / "report.json", log).f1;
  config.scorer = "mahalanobis";
  run.mahalanobis_f1 = cli::cmd_baseline(config, dir / "embeddings.jsonl", dir / "maha_scores.jsonl",
                                         dir / "maha_report.json", log)
                           .f1;
  config.scorer = "pca";
  run.pca_f1 = cli::cmd_baseline(config, dir / "embeddings.jsonl", dir / "pca_scores.jsonl",
                                 dir / "pca_report.json", log)
                   .f1;
  run.checkpoint = test::slurp(dir / "checkpoint.txt");
  run.report = test::slurp(dir / "report.json");
  return run;
}

std::optional<PipelineRun> first_run;

Outcome end_to_end() {
  test::ScratchDir dir("acceptance_run1");
  first_run = run_pipeline(dir.path());
  const auto& r = *first_run;
  return {r.f1 >= kPipelineF1 && r.f1 > r.mahalanobis_f1 && r.f1 > r.pca_f1,
          "validation F1=" + fmt(r.f1, 4) + " mahalanobis=" + fmt(r.mahalanobis_f1, 4) +
              " pca=" + fmt(r.pca_f1, 4)};
}

Outcome reproducibility() {
  if (!first_run) return {false, "first pipeline run did not complete"};
  test::ScratchDir dir("acceptance_run2");
  const PipelineRun second = run_pipeline(dir.path());
  const bool ckpt = second.checkpoint == first_run->checkpoint;
  const bool report = second.report == first_run->report;
  return {ckpt && report, std::string("checkpoint ") + (ckpt ? "identical" : "differs") + ", report " +
                              (report ? "identical" : "differs") + " (" +
                              std::to_string(second.checkpoint.size()) + " bytes)"};
}

Outcome format_round_trip() {
  Rng rng(99);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::uniform_int_distribution<std::size_t> count(1, 6);
  const std::size_t max_sent = 6, dim = 8;
  std::vector<corpus::EmbeddedDocument> docs;
  for (std::size_t i = 0; i < kRoundTripDocs; ++i) {
    corpus::EmbeddedDocument d{"doc-" + std::to_string(i) + (i % 7 == 0 ? " \"q\"é" : ""),
                               static_cast<int>(i % 5 == 0), count(rng), Tensor({max_sent, dim})};
    for (std::size_t k = 0; k < d.sentence_count * dim; ++k) {
      double v;
      do v = std::bit_cast<double>(bits(rng));
      while (!std::isfinite(v));
      d.matrix[k] = v;
    }
    docs.push_back(std::move(d));
  }
  test::ScratchDir dir("acceptance_format");
  corpus::write_embeddings(docs, dir / "a.jsonl");
  const auto back = corpus::read_embeddings(dir / "a.jsonl");
  bool same = back.size() == docs.size();
  for (std::size_t i = 0; same && i < docs.size(); ++i) {
    same = back[i].id == docs[i].id && back[i].label == docs[i].label &&
           back[i].sentence_count == docs[i].sentence_count && back[i].matrix.shape() == docs[i].matrix.shape();
    for (std::size_t k = 0; same && k < docs[i].matrix.size(); ++k)
      same = std::bit_cast<std::uint64_t>(back[i].matrix[k]) == std::bit_cast<std::uint64_t>(docs[i].matrix[k]);
  }
  corpus::write_embeddings(back, dir / "b.jsonl");
  const bool bytes = test::slurp(dir / "a.jsonl") == test::slurp(dir / "b.jsonl");
  return {same && bytes, "docs=" + std::to_string(docs.size()) + " values " + (same ? "bit-exact" : "differ") +
                             ", rewrite " + (bytes ? "byte-identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"reference_metrics", 1e-3, table_metrics},
      {"gradient_suite", 30.0, gradient_suite},
      {"conv_oracle", 10.0, conv_oracle},
      {"ae_overfit", 60.0, ae_overfit},
      {"baseline_correctness", 30.0, baseline_correctness},
      {"end_to_end_synthetic", 300.0, end_to_end},
      {"reproducibility", 300.0, reproducibility},
      {"format_round_trip", 10.0, format_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << "  " << o.detail << "  [" << fmt(seconds, 3) << " s / "
              << fmt(c.budget_seconds, 3) << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
