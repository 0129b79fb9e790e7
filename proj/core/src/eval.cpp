#include "textlier/eval.hpp"

#include <iomanip>
#include <sstream>
#include <vector>

#include "textlier/checkpoint.hpp"
#include "textlier/error.hpp"

namespace textlier::eval {

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size())
    throw ArgumentError("confusion: " + std::to_string(labels.size()) + " labels but " +
                        std::to_string(predictions.size()) + " predictions");
  if (labels.empty()) throw ArgumentError("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i], p = predictions[i];
    if ((y != 0 && y != 1) || (p != 0 && p != 1))
      throw ArgumentError("confusion: labels and predictions must be 0 or 1");
    if (y == 0)
      (p == 0 ? cm.tn : cm.fp) += 1;
    else
      (p == 0 ? cm.fn : cm.tp) += 1;
  }
  return cm;
}

EvalReport metrics(const ConfusionMatrix& cm) {
  EvalReport r;
  r.confusion = cm;
  r.n_samples = cm.total();
  const auto tp = static_cast<double>(cm.tp);
  if (cm.tp + cm.fp == 0)
    r.precision_degenerate = true;
  else
    r.precision = tp / static_cast<double>(cm.tp + cm.fp);
  if (cm.tp + cm.fn == 0)
    r.recall_degenerate = true;
  else
    r.recall = tp / static_cast<double>(cm.tp + cm.fn);
  if (r.precision + r.recall == 0.0)
    r.f1_degenerate = r.precision_degenerate || r.recall_degenerate;
  else
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

nlohmann::ordered_json to_json(const EvalReport& r, const std::string& item) {
  nlohmann::ordered_json j;
  j["item"] = item;
  j["n_samples"] = r.n_samples;
  j["f1"] = r.f1;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["confusion_matrix"] = {{r.confusion.tn, r.confusion.fp}, {r.confusion.fn, r.confusion.tp}};
  j["degenerate"] = {{"precision", r.precision_degenerate},
                     {"recall", r.recall_degenerate},
                     {"f1", r.f1_degenerate}};
  return j;
}

namespace {

std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

}  // namespace

std::string to_table(const EvalReport& r, const std::string& item) {
  const std::vector<std::string> headers{"Item",           "Validation Sample", "F1",
                                         "Precision Score", "Recall Score",     "Confusion Matrix"};
  const std::string cm = "[[" + std::to_string(r.confusion.tn) + ", " +
                         std::to_string(r.confusion.fp) + "], [" + std::to_string(r.confusion.fn) +
                         ", " + std::to_string(r.confusion.tp) + "]]";
  const std::vector<std::string> cells{item,
                                       std::to_string(r.n_samples),
                                       fixed4(r.f1),
                                       fixed4(r.precision),
                                       fixed4(r.recall),
                                       cm};
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::size_t width = std::max(headers[i].size(), cells[i].size());
      out << (i == 0 ? "| " : " | ") << std::left << std::setw(static_cast<int>(width)) << row[i];
    }
    out << " |\n";
  };
  emit(headers);
  std::vector<std::string> rule;
  for (std::size_t i = 0; i < headers.size(); ++i)
    rule.push_back(std::string(std::max(headers[i].size(), cells[i].size()), '-'));
  emit(rule);
  emit(cells);
  return out.str();
}

EvalReport evaluate_documents(const ModelBundle& bundle,
                              std::span<const corpus::EmbeddedDocument> docs) {
  if (!bundle.trained()) throw StateError("evaluate: model bundle is not trained");
  if (docs.empty()) throw ArgumentError("evaluate: no documents to evaluate");
  std::vector<int> labels, predictions;
  labels.reserve(docs.size());
  predictions.reserve(docs.size());
  for (const auto& d : docs) {
    labels.push_back(d.label);
    predictions.push_back(bundle.classifier->predict(bundle.autoencoder->featurize(d)));
  }
  return metrics(confusion(labels, predictions));
}

EvalReport evaluate_pipeline(const ModelBundle& bundle, const corpus::DatasetSplit& split,
                             corpus::Partition partition) {
  if (!bundle.trained()) throw StateError("evaluate: model bundle is not trained");
  const auto& docs = split.partition(partition);
  if (docs.empty())
    throw ArgumentError("evaluate: partition '" + std::string(corpus::to_string(partition)) +
                        "' is empty");
  return evaluate_documents(bundle, docs);
}

}  // namespace textlier::eval
