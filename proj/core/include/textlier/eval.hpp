#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "textlier/autoencoder.hpp"
#include "textlier/classifier.hpp"
#include "textlier/corpus/document.hpp"

namespace textlier::eval {

/// Rows are the true class (0 then 1), columns the prediction (0 then 1).
struct ConfusionMatrix {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  std::size_t total() const noexcept { return tn + fp + fn + tp; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Outlier (label 1) is the positive class. A metric whose denominator is
/// zero is reported as 0 with its degenerate flag set.
struct EvalReport {
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_samples = 0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

/// Throws ArgumentError for empty or unequal-length inputs, or labels outside {0, 1}.
ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions);

EvalReport metrics(const ConfusionMatrix& cm);

nlohmann::ordered_json to_json(const EvalReport& report, const std::string& item);
/// Aligned plain-text table with the columns
/// Item | Validation Sample | F1 | Precision Score | Recall Score | Confusion Matrix.
std::string to_table(const EvalReport& report, const std::string& item);

/// Trained autoencoder plus classifier head.
struct ModelBundle {
  std::optional<ae::AutoencoderModel> autoencoder;
  std::optional<classifier::LogisticModel> classifier;

  bool trained() const noexcept { return autoencoder && classifier; }
};

/// featurize -> predict -> confusion -> metrics over one partition.
/// Throws StateError for an untrained bundle, ArgumentError for an empty partition.
EvalReport evaluate_pipeline(const ModelBundle& bundle, const corpus::DatasetSplit& split,
                             corpus::Partition partition);
EvalReport evaluate_documents(const ModelBundle& bundle,
                              std::span<const corpus::EmbeddedDocument> docs);

}  // namespace textlier::eval
