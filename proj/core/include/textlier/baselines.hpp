#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "textlier/corpus/document.hpp"
#include "textlier/linalg.hpp"

namespace textlier::baselines {

/// Multivariate Gaussian fitted by sample statistics, with epsilon * I added
/// to the covariance so the Cholesky factor always exists.
struct GaussianModel {
  std::vector<double> mean;
  linalg::Matrix covariance;  // regularised: sample covariance + epsilon * I
  double epsilon = 0.0;
  linalg::Matrix cholesky_factor;
  std::vector<std::string> warnings;

  std::size_t dim() const noexcept { return mean.size(); }
};

/// Biased (1/N) sample mean and covariance plus epsilon * I. Fewer than d + 1
/// vectors leave the covariance rank-deficient; the model then carries a
/// warning. Throws ArgumentError for no vectors or negative epsilon.
GaussianModel fit_gaussian(std::span<const std::vector<double>> vectors, double epsilon = 1e-6);

/// (x - mean)^T (covariance)^-1 (x - mean) via the Cholesky factor.
double mahalanobis_sq(const GaussianModel& model, std::span<const double> x);

/// Univariate normal density; requires a one-dimensional model.
double gaussian_density(const GaussianModel& model, double x);

struct PCAModel {
  std::vector<double> mean;
  linalg::Matrix components;         // k x d, orthonormal rows
  std::vector<double> eigenvalues;   // k, non-increasing
  std::vector<double> all_eigenvalues;  // d, spectrum of the covariance

  std::size_t dim() const noexcept { return mean.size(); }
  std::size_t k() const noexcept { return components.rows(); }
};

/// Top-k eigenpairs of the biased sample covariance, by cyclic Jacobi.
PCAModel fit_pca(std::span<const std::vector<double>> vectors, std::size_t k);

/// Squared norm of the residual of (x - mean) after projecting onto the
/// retained components.
double pca_recon_error(const PCAModel& model, std::span<const double> x);

enum class Scorer { mahalanobis, pca_recon, ae_recon };

std::string_view to_string(Scorer scorer) noexcept;
Scorer parse_scorer(std::string_view text);

struct ScoredItem {
  std::string doc_id;
  double score = 0.0;  // higher is more anomalous
  Scorer scorer = Scorer::mahalanobis;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

enum class Pooling { mean_of_content_rows };

/// Document vector used by the baselines: mean of the non-padded rows.
std::vector<double> pool(const corpus::EmbeddedDocument& doc,
                         Pooling pooling = Pooling::mean_of_content_rows);
std::vector<std::vector<double>> pool_all(std::span<const corpus::EmbeddedDocument> docs,
                                          Pooling pooling = Pooling::mean_of_content_rows);

using BaselineModel = std::variant<GaussianModel, PCAModel>;

/// One score per document, in input order.
std::vector<ScoredItem> score_corpus(const BaselineModel& model,
                                     std::span<const corpus::EmbeddedDocument> docs,
                                     Pooling pooling = Pooling::mean_of_content_rows);

/// Linear-interpolated percentile (q in [0, 100]) of a non-empty sample.
double percentile(std::vector<double> values, double q);

/// 1 where score > threshold, else 0.
std::vector<int> threshold_predict(std::span<const ScoredItem> scores, double threshold);

}  // namespace textlier::baselines
