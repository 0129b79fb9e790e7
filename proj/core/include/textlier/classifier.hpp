#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "textlier/checkpoint.hpp"
#include "textlier/feature.hpp"

namespace textlier::classifier {

/// Per-feature z-scoring fitted on training features. Standard deviations
/// below 1e-12 are replaced by 1.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev);

  static Standardizer fit(std::span<const std::vector<double>> rows);

  std::vector<double> transform(std::span<const double> x) const;
  std::size_t dim() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& stddev() const noexcept { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

struct LogRegConfig {
  double lambda = 1e-4;
  double learning_rate = 0.1;
  std::size_t epochs = 2000;
  double threshold = 0.5;
  std::uint64_t seed = 0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1e-4;
  double threshold = 0.5;
  Standardizer standardizer;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double gradient_norm = 0.0;  // of the full objective, at exit

  std::size_t dim() const noexcept { return weights.size(); }

  /// sigmoid(w . standardize(x) + b), kept strictly inside (0, 1).
  double predict_proba(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  double predict_proba(const FeatureVector& f) const { return predict_proba(f.values()); }
  int predict(const FeatureVector& f) const { return predict(f.values()); }

  /// Adds config entries and parameter blocks under the "logreg." prefix.
  void to_checkpoint(Checkpoint& ckpt) const;
  static LogisticModel from_checkpoint(const Checkpoint& ckpt);
};

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> weight_grad;
  double bias_grad = 0.0;
};

/// Mean binary cross-entropy of sigmoid(w . x + b) plus (lambda / 2) ||w||^2,
/// with its gradient, over already-standardised rows.
ObjectiveValue logistic_objective(std::span<const double> weights, double bias,
                                  std::span<const std::vector<double>> rows,
                                  std::span<const int> labels, double lambda);

/// Full-batch proximal gradient descent: a gradient step on the mean
/// cross-entropy followed by the closed-form shrink for the L2 term, which is
/// stable for any lambda. Weights start at small seeded values.
/// Throws ArgumentError unless both classes are present and all rows share one
/// length; TrainingError if the objective stops being finite.
LogisticModel train_logreg(std::span<const LabeledFeature> data, const LogRegConfig& config);

double sigmoid(double z) noexcept;

}  // namespace textlier::classifier
