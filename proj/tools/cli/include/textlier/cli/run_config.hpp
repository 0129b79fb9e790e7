#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "textlier/autoencoder.hpp"
#include "textlier/classifier.hpp"

namespace textlier::cli {

/// Every tunable of a pipeline run. Resolution order is defaults, then a JSON
/// config file, then command-line flags; the resolved value is persisted next
/// to each command's outputs.
struct RunConfig {
  std::uint64_t seed = 42;
  /// Unset means: 32 when embedding, the embedding file header otherwise.
  std::optional<std::size_t> max_sent;
  /// Unset means: 768 for the hash provider, the input's dimension otherwise.
  std::optional<std::size_t> embed_dim;

  std::string provider = "hash";
  std::size_t latent_dim = 32;
  std::vector<std::size_t> channels{8, 16, 32};
  std::size_t kernel = 3;
  std::size_t stride = 2;
  std::size_t padding = 1;
  std::size_t ae_epochs = 50;
  std::size_t batch_size = 32;
  double ae_learning_rate = 1e-3;
  bool masked_loss = false;

  double lambda = 1e-4;
  double logreg_learning_rate = 0.1;
  std::size_t logreg_epochs = 2000;
  double threshold = 0.5;

  std::array<double, 3> fractions{0.8, 0.1, 0.1};
  std::size_t n_inject = 1000;

  std::string scorer = "mahalanobis";
  std::size_t pca_components = 10;
  double epsilon = 1e-6;
  double baseline_percentile = 95.0;

  std::string partition = "validation";
  std::filesystem::path out_dir = ".";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::ordered_json to_json(const RunConfig& config);
/// Overrides only the keys present in `j`; unknown keys are rejected. The
/// "command" and "io" entries of a persisted resolved config are skipped.
void apply_json(RunConfig& config, const nlohmann::json& j);
/// Reads a JSON config file on top of `config`. Throws IoError / FormatError.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Stage configs derived from the run, with named sub-seeds per stage.
ae::AEConfig autoencoder_config(const RunConfig& config, std::size_t max_sent,
                                std::size_t embed_dim);
classifier::LogRegConfig logreg_config(const RunConfig& config);
std::uint64_t split_seed(const RunConfig& config);
std::uint64_t oversample_seed(const RunConfig& config);
std::uint64_t inject_seed(const RunConfig& config);

}  // namespace textlier::cli
