#include "textlier/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "textlier/error.hpp"

namespace textlier::baselines {

GaussianModel fit_gaussian(std::span<const std::vector<double>> vectors, double epsilon) {
  if (vectors.empty()) throw ArgumentError("fit_gaussian: no vectors");
  if (!(epsilon >= 0.0)) throw ArgumentError("fit_gaussian: epsilon must be non-negative");
  GaussianModel model;
  model.epsilon = epsilon;
  model.mean = linalg::mean_of(vectors);
  const std::size_t d = model.mean.size();
  if (d == 0) throw ArgumentError("fit_gaussian: zero-dimensional vectors");
  if (vectors.size() < d + 1)
    model.warnings.push_back("fit_gaussian: " + std::to_string(vectors.size()) +
                             " vectors for dimension " + std::to_string(d) +
                             "; covariance is rank-deficient and relies on epsilon");
  model.covariance = linalg::covariance_of(vectors, model.mean);
  for (std::size_t i = 0; i < d; ++i) model.covariance(i, i) += epsilon;
  model.cholesky_factor = linalg::cholesky(model.covariance);
  return model;
}

double mahalanobis_sq(const GaussianModel& model, std::span<const double> x) {
  if (x.size() != model.dim())
    throw ShapeError("mahalanobis_sq: expected a " + std::to_string(model.dim()) +
                     "-vector, got " + std::to_string(x.size()));
  // With covariance = L L^T, the distance is ||L^-1 (x - mean)||^2.
  const linalg::Matrix& l = model.cholesky_factor;
  const std::size_t d = model.dim();
  std::vector<double> y(d);
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double s = x[i] - model.mean[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
    sum += y[i] * y[i];
  }
  return sum;
}

double gaussian_density(const GaussianModel& model, double x) {
  if (model.dim() != 1)
    throw ArgumentError("gaussian_density: only one-dimensional models are supported");
  const double var = model.covariance(0, 0);
  if (!(var > 0.0)) throw ArgumentError("gaussian_density: variance must be positive");
  const double z = x - model.mean[0];
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

PCAModel fit_pca(std::span<const std::vector<double>> vectors, std::size_t k) {
  if (vectors.size() < 2) throw ArgumentError("fit_pca: at least two vectors are required");
  PCAModel model;
  model.mean = linalg::mean_of(vectors);
  const std::size_t d = model.mean.size();
  if (k == 0 || k > d)
    throw ArgumentError("fit_pca: k must be in [1, " + std::to_string(d) + "], got " +
                        std::to_string(k));
  const auto eig = linalg::jacobi_eigen(linalg::covariance_of(vectors, model.mean));
  model.all_eigenvalues = eig.values;
  model.components = linalg::Matrix(k, d);
  for (std::size_t r = 0; r < k; ++r) {
    // Rounding can leave tiny negative eigenvalues of a PSD matrix.
    model.eigenvalues.push_back(std::max(0.0, eig.values[r]));
    for (std::size_t c = 0; c < d; ++c) model.components(r, c) = eig.vectors(r, c);
  }
  return model;
}

double pca_recon_error(const PCAModel& model, std::span<const double> x) {
  const std::size_t d = model.dim();
  if (x.size() != d)
    throw ShapeError("pca_recon_error: expected a " + std::to_string(d) + "-vector, got " +
                     std::to_string(x.size()));
  std::vector<double> residual(d);
  for (std::size_t i = 0; i < d; ++i) residual[i] = x[i] - model.mean[i];
  const std::vector<double> centered = residual;
  for (std::size_t r = 0; r < model.k(); ++r) {
    auto comp = model.components.row(r);
    double coef = 0.0;
    for (std::size_t i = 0; i < d; ++i) coef += comp[i] * centered[i];
    for (std::size_t i = 0; i < d; ++i) residual[i] -= coef * comp[i];
  }
  double sum = 0.0;
  for (double v : residual) sum += v * v;
  return sum;
}

std::string_view to_string(Scorer scorer) noexcept {
  switch (scorer) {
    case Scorer::mahalanobis: return "mahalanobis";
    case Scorer::pca_recon: return "pca_recon";
    case Scorer::ae_recon: return "ae_recon";
  }
  return "mahalanobis";
}

Scorer parse_scorer(std::string_view text) {
  if (text == "mahalanobis") return Scorer::mahalanobis;
  if (text == "pca" || text == "pca_recon") return Scorer::pca_recon;
  if (text == "ae_recon") return Scorer::ae_recon;
  throw ArgumentError("unknown scorer '" + std::string(text) + "' (expected mahalanobis or pca)");
}

std::vector<double> pool(const corpus::EmbeddedDocument& doc, Pooling) {
  const std::size_t d = doc.embed_dim();
  std::vector<double> out(d, 0.0);
  if (doc.sentence_count == 0) return out;
  for (std::size_t r = 0; r < doc.sentence_count; ++r) {
    auto row = doc.row(r);
    for (std::size_t i = 0; i < d; ++i) out[i] += row[i];
  }
  for (double& v : out) v /= static_cast<double>(doc.sentence_count);
  return out;
}

std::vector<std::vector<double>> pool_all(std::span<const corpus::EmbeddedDocument> docs,
                                          Pooling pooling) {
  std::vector<std::vector<double>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(pool(d, pooling));
  return out;
}

std::vector<ScoredItem> score_corpus(const BaselineModel& model,
                                     std::span<const corpus::EmbeddedDocument> docs,
                                     Pooling pooling) {
  std::vector<ScoredItem> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    const auto v = pool(doc, pooling);
    if (const auto* g = std::get_if<GaussianModel>(&model))
      out.push_back({doc.id, mahalanobis_sq(*g, v), Scorer::mahalanobis});
    else
      out.push_back({doc.id, pca_recon_error(std::get<PCAModel>(model), v), Scorer::pca_recon});
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw ArgumentError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<int> threshold_predict(std::span<const ScoredItem> scores, double threshold) {
  std::vector<int> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back(s.score > threshold ? 1 : 0);
  return out;
}

}  // namespace textlier::baselines
