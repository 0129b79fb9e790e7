#include "textlier/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "textlier/error.hpp"
#include "textlier/random.hpp"

namespace textlier::classifier {

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size())
    throw ShapeError("standardizer: mean and stddev lengths differ");
  for (double s : stddev_)
    if (!(s > 0.0)) throw ArgumentError("standardizer: stddev entries must be positive");
}

Standardizer Standardizer::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw ArgumentError("standardizer: no rows to fit");
  const std::size_t d = rows.front().size();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (const auto& r : rows) {
    if (r.size() != d) throw ShapeError("standardizer: rows have different lengths");
    for (std::size_t i = 0; i < d; ++i) mean[i] += r[i];
  }
  const auto n = static_cast<double>(rows.size());
  for (double& m : mean) m /= n;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < d; ++i) var[i] += (r[i] - mean[i]) * (r[i] - mean[i]);
  std::vector<double> stddev(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double s = std::sqrt(var[i] / n);
    stddev[i] = s < 1e-12 ? 1.0 : s;
  }
  return Standardizer(std::move(mean), std::move(stddev));
}

std::vector<double> Standardizer::transform(std::span<const double> x) const {
  if (x.size() != dim())
    throw ShapeError("standardizer: expected " + std::to_string(dim()) + " features, got " +
                     std::to_string(x.size()));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean_[i]) / stddev_[i];
  return out;
}

double LogisticModel::predict_proba(std::span<const double> x) const {
  if (x.size() != dim())
    throw ShapeError("logistic model: expected " + std::to_string(dim()) + " features, got " +
                     std::to_string(x.size()));
  const double p = sigmoid(dot(weights, standardizer.transform(x)) + bias);
  return std::clamp(p, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
}

int LogisticModel::predict(std::span<const double> x) const {
  return predict_proba(x) >= threshold ? 1 : 0;
}

void LogisticModel::to_checkpoint(Checkpoint& ckpt) const {
  ckpt.config["logreg.lambda"] = format_real(lambda);
  ckpt.config["logreg.threshold"] = format_real(threshold);
  ckpt.params.push_back({"logreg.weights", nn::Tensor({dim()}, weights)});
  ckpt.params.push_back({"logreg.bias", nn::Tensor({1}, {bias})});
  ckpt.params.push_back({"logreg.standardizer.mean", nn::Tensor({dim()}, standardizer.mean())});
  ckpt.params.push_back({"logreg.standardizer.std", nn::Tensor({dim()}, standardizer.stddev())});
  ckpt.params.push_back(
      {"logreg.training", nn::Tensor({3}, {initial_loss, final_loss, gradient_norm})});
}

LogisticModel LogisticModel::from_checkpoint(const Checkpoint& ckpt) {
  LogisticModel m;
  m.lambda = parse_real(ckpt.value("logreg.lambda"));
  m.threshold = parse_real(ckpt.value("logreg.threshold"));
  if (!(m.threshold > 0.0 && m.threshold < 1.0))
    throw FormatError("checkpoint entry 'logreg.threshold' must lie in (0, 1)");
  m.weights = ckpt.param("logreg.weights").values();
  const auto& bias = ckpt.param("logreg.bias");
  if (bias.size() != 1) throw FormatError("checkpoint block 'logreg.bias' must hold one value");
  m.bias = bias[0];
  try {
    m.standardizer = Standardizer(ckpt.param("logreg.standardizer.mean").values(),
                                  ckpt.param("logreg.standardizer.std").values());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("checkpoint standardizer is invalid: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatError(std::string("checkpoint standardizer is invalid: ") + e.what());
  }
  if (m.standardizer.dim() != m.weights.size())
    throw FormatError("checkpoint logistic weights and standardizer lengths differ");
  if (ckpt.has_param("logreg.training")) {
    const auto& t = ckpt.param("logreg.training");
    if (t.size() == 3) {
      m.initial_loss = t[0];
      m.final_loss = t[1];
      m.gradient_norm = t[2];
    }
  }
  return m;
}

ObjectiveValue logistic_objective(std::span<const double> weights, double bias,
                                  std::span<const std::vector<double>> rows,
                                  std::span<const int> labels, double lambda) {
  if (rows.size() != labels.size() || rows.empty())
    throw ArgumentError("logistic_objective: rows and labels must be non-empty and aligned");
  const std::size_t d = weights.size();
  ObjectiveValue out{0.0, std::vector<double>(d, 0.0), 0.0};
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (rows[n].size() != d) throw ShapeError("logistic_objective: row length mismatch");
    const double z = dot(weights, rows[n]) + bias;
    // -[y log s(z) + (1 - y) log(1 - s(z))] = softplus(z) - y z
    out.loss += softplus(z) - labels[n] * z;
    const double residual = sigmoid(z) - labels[n];
    for (std::size_t i = 0; i < d; ++i) out.weight_grad[i] += residual * rows[n][i];
    out.bias_grad += residual;
  }
  const auto count = static_cast<double>(rows.size());
  out.loss /= count;
  out.bias_grad /= count;
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    out.weight_grad[i] = out.weight_grad[i] / count + lambda * weights[i];
    sq += weights[i] * weights[i];
  }
  out.loss += 0.5 * lambda * sq;
  return out;
}

LogisticModel train_logreg(std::span<const LabeledFeature> data, const LogRegConfig& config) {
  if (!(config.lambda >= 0.0) || !(config.learning_rate > 0.0) || config.epochs == 0 ||
      !(config.threshold > 0.0 && config.threshold < 1.0))
    throw ArgumentError(
        "train_logreg: need lambda >= 0, learning rate > 0, epochs > 0, threshold in (0, 1)");
  if (data.empty()) throw ArgumentError("train_logreg: no training data");

  std::vector<std::vector<double>> raw;
  std::vector<int> labels;
  raw.reserve(data.size());
  bool seen[2] = {false, false};
  for (const auto& item : data) {
    if (item.label != 0 && item.label != 1)
      throw ArgumentError("train_logreg: labels must be 0 or 1");
    seen[item.label] = true;
    raw.push_back(item.feature.values());
    labels.push_back(item.label);
    if (raw.back().size() != raw.front().size())
      throw ArgumentError("train_logreg: feature vectors have different lengths");
  }
  if (!seen[0] || !seen[1]) throw ArgumentError("train_logreg: both classes must be present");

  LogisticModel model;
  model.lambda = config.lambda;
  model.threshold = config.threshold;
  model.standardizer = Standardizer::fit(raw);
  std::vector<std::vector<double>> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) rows.push_back(model.standardizer.transform(r));

  const std::size_t d = rows.front().size();
  Rng rng(derive_seed(config.seed, "logreg.init"));
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  model.weights.resize(d);
  for (double& w : model.weights) w = init(rng);
  model.bias = 0.0;

  const double lr = config.learning_rate;
  const double shrink = 1.0 / (1.0 + lr * config.lambda);
  ObjectiveValue obj = logistic_objective(model.weights, model.bias, rows, labels, config.lambda);
  model.initial_loss = obj.loss;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    // obj.weight_grad includes lambda * w; the data-term gradient is that minus lambda * w.
    for (std::size_t i = 0; i < d; ++i) {
      const double data_grad = obj.weight_grad[i] - config.lambda * model.weights[i];
      model.weights[i] = (model.weights[i] - lr * data_grad) * shrink;
    }
    model.bias -= lr * obj.bias_grad;
    obj = logistic_objective(model.weights, model.bias, rows, labels, config.lambda);
    if (!std::isfinite(obj.loss))
      throw TrainingError("logistic regression diverged in epoch " + std::to_string(epoch));
  }
  model.final_loss = obj.loss;
  double g2 = obj.bias_grad * obj.bias_grad;
  for (double g : obj.weight_grad) g2 += g * g;
  model.gradient_norm = std::sqrt(g2);
  return model;
}

}  // namespace textlier::classifier
