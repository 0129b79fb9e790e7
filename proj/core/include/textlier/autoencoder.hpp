#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "textlier/checkpoint.hpp"
#include "textlier/corpus/document.hpp"
#include "textlier/feature.hpp"
#include "textlier/nn/sequential.hpp"

namespace textlier::ae {

struct AEConfig {
  std::size_t max_sent = 32;
  std::size_t embed_dim = 768;
  std::size_t latent_dim = 32;
  /// Output channels of each encoder convolution; the decoder mirrors them.
  std::vector<std::size_t> channels{8, 16, 32};
  std::size_t kernel = 3;  // odd
  std::size_t stride = 2;
  std::size_t padding = 1;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  /// Restrict the training loss to content rows. Reported reconstruction
  /// errors always cover every element.
  bool masked_loss = false;
  std::uint64_t seed = 0;

  friend bool operator==(const AEConfig&, const AEConfig&) = default;
};

/// Throws ArgumentError for inconsistent settings, including an encoder that
/// collapses the input below 1x1 or a decoder that cannot grow back to it.
void validate(const AEConfig& config);

struct Reconstruction {
  nn::Tensor reconstruction;  // (1, max_sent, embed_dim)
  double recon_error = 0.0;
};

/// Convolutional autoencoder over (1, max_sent, embed_dim) document matrices.
///
/// Encoder: [conv(k, stride) -> ReLU] per channel stage, flatten, dense to
/// latent_dim. Decoder: dense, reshape, [upsample2x -> conv -> ReLU] per stage
/// in reverse, crop to the input extent, and a final linear conv to 1 channel.
class AutoencoderModel {
 public:
  /// Fresh model with seeded Glorot-uniform weights.
  static AutoencoderModel build(const AEConfig& config);

  const AEConfig& config() const noexcept { return config_; }
  nn::Sequential& encoder() noexcept { return encoder_; }
  const nn::Sequential& encoder() const noexcept { return encoder_; }
  nn::Sequential& decoder() noexcept { return decoder_; }
  const nn::Sequential& decoder() const noexcept { return decoder_; }

  /// Per-epoch mean training loss.
  std::vector<double> training_log;

  std::vector<double> encode(const corpus::EmbeddedDocument& doc) const;
  Reconstruction reconstruct(const corpus::EmbeddedDocument& doc) const;
  FeatureVector featurize(const corpus::EmbeddedDocument& doc) const;
  std::vector<FeatureVector> featurize(std::span<const corpus::EmbeddedDocument> docs) const;

  /// (1, max_sent, embed_dim) view of a document; throws ShapeError on mismatch.
  nn::Tensor input_tensor(const corpus::EmbeddedDocument& doc) const;

  std::vector<nn::NamedTensor> named_parameters() const;

  /// Adds config entries and parameter blocks under the "ae." prefix.
  void to_checkpoint(Checkpoint& ckpt) const;
  /// Rebuilds the architecture from the stored config and loads every block.
  static AutoencoderModel from_checkpoint(const Checkpoint& ckpt);

 private:
  explicit AutoencoderModel(AEConfig config) : config_(std::move(config)) {}

  AEConfig config_;
  nn::Sequential encoder_;
  nn::Sequential decoder_;
};

/// Mini-batch Adam on mean reconstruction MSE, shuffling with a seeded
/// generator each epoch. Throws ArgumentError for no documents, ShapeError for
/// documents that do not match the config, and TrainingError (naming the
/// epoch) when the loss stops being finite.
AutoencoderModel train_autoencoder(std::span<const corpus::EmbeddedDocument> docs,
                                   const AEConfig& config);

}  // namespace textlier::ae
