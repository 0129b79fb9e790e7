#include "textlier/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "textlier/error.hpp"
#include "textlier/nn/adam.hpp"
#include "textlier/nn/loss.hpp"
#include "textlier/random.hpp"

namespace textlier::ae {

namespace {

struct Geometry {
  std::size_t rows;
  std::size_t cols;
};

Geometry encoded_extent(const AEConfig& c) {
  Geometry g{c.max_sent, c.embed_dim};
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    g.rows = nn::conv_output_extent(g.rows, c.kernel, c.stride, c.padding);
    g.cols = nn::conv_output_extent(g.cols, c.kernel, c.stride, c.padding);
    if (g.rows == 0 || g.cols == 0)
      throw ArgumentError("autoencoder: encoder stage " + std::to_string(i) +
                          " reduces the input below 1x1");
  }
  return g;
}

std::string join(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<std::size_t> split_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoul(item));
  return out;
}

std::size_t to_size(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw FormatError("checkpoint entry '" + key + "' is not a non-negative integer: " + text);
  }
}

}  // namespace

void validate(const AEConfig& c) {
  if (c.max_sent == 0 || c.embed_dim == 0 || c.latent_dim == 0)
    throw ArgumentError("autoencoder: max_sent, embed_dim and latent_dim must be positive");
  if (c.channels.empty()) throw ArgumentError("autoencoder: at least one conv stage is required");
  for (std::size_t ch : c.channels)
    if (ch == 0) throw ArgumentError("autoencoder: channel counts must be positive");
  if (c.kernel == 0 || c.kernel % 2 == 0) throw ArgumentError("autoencoder: kernel must be odd");
  if (c.stride == 0) throw ArgumentError("autoencoder: stride must be positive");
  if (c.epochs == 0 || c.batch_size == 0)
    throw ArgumentError("autoencoder: epochs and batch_size must be positive");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate))
    throw ArgumentError("autoencoder: learning rate must be positive");
  const Geometry g = encoded_extent(c);
  const std::size_t grow = std::size_t{1} << c.channels.size();
  if (g.rows * grow < c.max_sent || g.cols * grow < c.embed_dim)
    throw ArgumentError("autoencoder: decoder upsampling cannot recover the input extent");
}

AutoencoderModel AutoencoderModel::build(const AEConfig& config) {
  validate(config);
  AutoencoderModel model(config);
  Rng rng(derive_seed(config.seed, "ae.init"));
  const Geometry g = encoded_extent(config);
  const std::size_t stages = config.channels.size();
  const std::size_t deepest = config.channels.back();
  const std::size_t flat = deepest * g.rows * g.cols;
  const std::size_t same_pad = config.kernel / 2;

  std::size_t in_c = 1;
  for (std::size_t ch : config.channels) {
    model.encoder_.emplace<nn::Conv2D>(
        nn::ConvSpec{in_c, ch, config.kernel, config.kernel, config.stride, config.padding}, rng);
    model.encoder_.emplace<nn::Relu>();
    in_c = ch;
  }
  model.encoder_.emplace<nn::Reshape>(nn::Tensor::Shape{flat});
  model.encoder_.emplace<nn::Dense>(flat, config.latent_dim, rng);

  model.decoder_.emplace<nn::Dense>(config.latent_dim, flat, rng);
  model.decoder_.emplace<nn::Reshape>(nn::Tensor::Shape{deepest, g.rows, g.cols});
  std::size_t cur = deepest;
  for (std::size_t i = stages; i-- > 0;) {
    const std::size_t next = i > 0 ? config.channels[i - 1] : config.channels.front();
    model.decoder_.emplace<nn::Upsample2x>();
    model.decoder_.emplace<nn::Conv2D>(
        nn::ConvSpec{cur, next, config.kernel, config.kernel, 1, same_pad}, rng);
    model.decoder_.emplace<nn::Relu>();
    cur = next;
  }
  model.decoder_.emplace<nn::Crop2D>(config.max_sent, config.embed_dim);
  model.decoder_.emplace<nn::Conv2D>(
      nn::ConvSpec{cur, 1, config.kernel, config.kernel, 1, same_pad}, rng);
  return model;
}

nn::Tensor AutoencoderModel::input_tensor(const corpus::EmbeddedDocument& doc) const {
  if (doc.matrix.shape() != nn::Tensor::Shape{config_.max_sent, config_.embed_dim})
    throw ShapeError("document '" + doc.id + "' has matrix shape " +
                     nn::to_string(doc.matrix.shape()) + ", model expects (" +
                     std::to_string(config_.max_sent) + ", " + std::to_string(config_.embed_dim) +
                     ")");
  return doc.matrix.reshaped({1, config_.max_sent, config_.embed_dim});
}

std::vector<double> AutoencoderModel::encode(const corpus::EmbeddedDocument& doc) const {
  return encoder_.apply(input_tensor(doc)).values();
}

Reconstruction AutoencoderModel::reconstruct(const corpus::EmbeddedDocument& doc) const {
  const nn::Tensor x = input_tensor(doc);
  Reconstruction r;
  r.reconstruction = decoder_.apply(encoder_.apply(x));
  r.recon_error = nn::mse_loss(r.reconstruction, x).loss;
  return r;
}

FeatureVector AutoencoderModel::featurize(const corpus::EmbeddedDocument& doc) const {
  const nn::Tensor x = input_tensor(doc);
  const nn::Tensor z = encoder_.apply(x);
  const nn::Tensor y = decoder_.apply(z);
  return FeatureVector{doc.id, z.values(), nn::mse_loss(y, x).loss};
}

std::vector<FeatureVector> AutoencoderModel::featurize(
    std::span<const corpus::EmbeddedDocument> docs) const {
  std::vector<FeatureVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(featurize(d));
  return out;
}

std::vector<nn::NamedTensor> AutoencoderModel::named_parameters() const {
  std::vector<nn::NamedTensor> out;
  auto collect = [&out](const nn::Sequential& seq, const std::string& prefix) {
    const auto names = seq.parameter_names(prefix);
    const auto params = seq.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) out.push_back({names[i], *params[i]});
  };
  collect(encoder_, "ae.encoder");
  collect(decoder_, "ae.decoder");
  return out;
}

void AutoencoderModel::to_checkpoint(Checkpoint& ckpt) const {
  const AEConfig& c = config_;
  ckpt.config["ae.max_sent"] = std::to_string(c.max_sent);
  ckpt.config["ae.embed_dim"] = std::to_string(c.embed_dim);
  ckpt.config["ae.latent_dim"] = std::to_string(c.latent_dim);
  ckpt.config["ae.channels"] = join(c.channels);
  ckpt.config["ae.kernel"] = std::to_string(c.kernel);
  ckpt.config["ae.stride"] = std::to_string(c.stride);
  ckpt.config["ae.padding"] = std::to_string(c.padding);
  ckpt.config["ae.epochs"] = std::to_string(c.epochs);
  ckpt.config["ae.batch_size"] = std::to_string(c.batch_size);
  ckpt.config["ae.learning_rate"] = format_real(c.learning_rate);
  ckpt.config["ae.masked_loss"] = c.masked_loss ? "true" : "false";
  ckpt.config["ae.seed"] = std::to_string(c.seed);
  for (auto& p : named_parameters()) ckpt.params.push_back(std::move(p));
  if (!training_log.empty())
    ckpt.params.push_back({"ae.training_log", nn::Tensor({training_log.size()}, training_log)});
}

AutoencoderModel AutoencoderModel::from_checkpoint(const Checkpoint& ckpt) {
  AEConfig c;
  auto size_of = [&](const std::string& key) { return to_size(ckpt.value(key), key); };
  c.max_sent = size_of("ae.max_sent");
  c.embed_dim = size_of("ae.embed_dim");
  c.latent_dim = size_of("ae.latent_dim");
  try {
    c.channels = split_list(ckpt.value("ae.channels"));
  } catch (const std::logic_error&) {
    throw FormatError("checkpoint entry 'ae.channels' is not a comma-separated list");
  }
  c.kernel = size_of("ae.kernel");
  c.stride = size_of("ae.stride");
  c.padding = size_of("ae.padding");
  c.epochs = size_of("ae.epochs");
  c.batch_size = size_of("ae.batch_size");
  c.learning_rate = parse_real(ckpt.value("ae.learning_rate"));
  const std::string& masked = ckpt.value("ae.masked_loss");
  if (masked != "true" && masked != "false")
    throw FormatError("checkpoint entry 'ae.masked_loss' must be true or false");
  c.masked_loss = masked == "true";
  c.seed = to_size(ckpt.value("ae.seed"), "ae.seed");

  AutoencoderModel model = [&c] {
    try {
      return build(c);
    } catch (const ArgumentError& e) {
      throw FormatError(std::string("checkpoint autoencoder config is invalid: ") + e.what());
    }
  }();
  auto load = [&ckpt](nn::Sequential& seq, const std::string& prefix) {
    const auto names = seq.parameter_names(prefix);
    auto params = seq.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      const nn::Tensor& stored = ckpt.param(names[i]);
      if (stored.shape() != params[i]->shape())
        throw FormatError("checkpoint block '" + names[i] + "' has shape " +
                          nn::to_string(stored.shape()) + ", architecture expects " +
                          nn::to_string(params[i]->shape()));
      *params[i] = stored;
    }
  };
  load(model.encoder_, "ae.encoder");
  load(model.decoder_, "ae.decoder");
  if (ckpt.has_param("ae.training_log")) model.training_log = ckpt.param("ae.training_log").values();
  return model;
}

AutoencoderModel train_autoencoder(std::span<const corpus::EmbeddedDocument> docs,
                                   const AEConfig& config) {
  if (docs.empty()) throw ArgumentError("train_autoencoder: no documents");
  AutoencoderModel model = AutoencoderModel::build(config);

  std::vector<nn::Tensor> inputs;
  inputs.reserve(docs.size());
  for (const auto& d : docs) inputs.push_back(model.input_tensor(d));

  auto params = model.encoder().parameters();
  auto grads = model.encoder().gradients();
  for (nn::Tensor* p : model.decoder().parameters()) params.push_back(p);
  for (nn::Tensor* g : model.decoder().gradients()) grads.push_back(g);
  std::vector<const nn::Tensor*> const_params(params.begin(), params.end());
  nn::AdamState adam({config.learning_rate, 0.9, 0.999, 1e-8}, const_params);

  Rng shuffle_rng(derive_seed(config.seed, "ae.shuffle"));
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      model.encoder().zero_grad();
      model.decoder().zero_grad();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        const nn::Tensor& x = inputs[idx];
        const nn::Tensor y = model.decoder().forward(model.encoder().forward(x));
        nn::LossResult loss = config.masked_loss
                                  ? nn::masked_mse_loss(y, x, docs[idx].sentence_count)
                                  : nn::mse_loss(y, x);
        if (!std::isfinite(loss.loss))
          throw TrainingError("autoencoder training diverged in epoch " + std::to_string(epoch));
        epoch_loss += loss.loss;
        loss.gradient *= scale;
        model.encoder().backward(model.decoder().backward(loss.gradient));
      }
      try {
        nn::adam_step(params, grads, adam);
      } catch (const TrainingError& e) {
        throw TrainingError("autoencoder training diverged in epoch " + std::to_string(epoch) +
                            ": " + e.what());
      }
    }
    model.training_log.push_back(epoch_loss / static_cast<double>(docs.size()));
  }
  for (std::size_t i = 0; i < model.encoder().size(); ++i) model.encoder().layer(i).clear_cache();
  for (std::size_t i = 0; i < model.decoder().size(); ++i) model.decoder().layer(i).clear_cache();
  return model;
}

}  // namespace textlier::ae
