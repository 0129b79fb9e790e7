#include "textlier/cli/run_config.hpp"

#include <fstream>

#include "textlier/error.hpp"
#include "textlier/random.hpp"

namespace textlier::cli {

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["max_sent"] = c.max_sent ? nlohmann::ordered_json(*c.max_sent) : nlohmann::ordered_json();
  j["embed_dim"] = c.embed_dim ? nlohmann::ordered_json(*c.embed_dim) : nlohmann::ordered_json();
  j["provider"] = c.provider;
  j["latent_dim"] = c.latent_dim;
  j["channels"] = c.channels;
  j["kernel"] = c.kernel;
  j["stride"] = c.stride;
  j["padding"] = c.padding;
  j["ae_epochs"] = c.ae_epochs;
  j["batch_size"] = c.batch_size;
  j["ae_learning_rate"] = c.ae_learning_rate;
  j["masked_loss"] = c.masked_loss;
  j["lambda"] = c.lambda;
  j["logreg_learning_rate"] = c.logreg_learning_rate;
  j["logreg_epochs"] = c.logreg_epochs;
  j["threshold"] = c.threshold;
  j["fractions"] = c.fractions;
  j["n_inject"] = c.n_inject;
  j["scorer"] = c.scorer;
  j["pca_components"] = c.pca_components;
  j["epsilon"] = c.epsilon;
  j["baseline_percentile"] = c.baseline_percentile;
  j["partition"] = c.partition;
  j["out_dir"] = c.out_dir.generic_string();
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("run config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "max_sent") c.max_sent = value.is_null() ? std::nullopt : std::optional(value.get<std::size_t>());
      else if (key == "embed_dim") c.embed_dim = value.is_null() ? std::nullopt : std::optional(value.get<std::size_t>());
      else if (key == "provider") c.provider = value.get<std::string>();
      else if (key == "latent_dim") c.latent_dim = value.get<std::size_t>();
      else if (key == "channels") c.channels = value.get<std::vector<std::size_t>>();
      else if (key == "kernel") c.kernel = value.get<std::size_t>();
      else if (key == "stride") c.stride = value.get<std::size_t>();
      else if (key == "padding") c.padding = value.get<std::size_t>();
      else if (key == "ae_epochs") c.ae_epochs = value.get<std::size_t>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "ae_learning_rate") c.ae_learning_rate = value.get<double>();
      else if (key == "masked_loss") c.masked_loss = value.get<bool>();
      else if (key == "lambda") c.lambda = value.get<double>();
      else if (key == "logreg_learning_rate") c.logreg_learning_rate = value.get<double>();
      else if (key == "logreg_epochs") c.logreg_epochs = value.get<std::size_t>();
      else if (key == "threshold") c.threshold = value.get<double>();
      else if (key == "fractions") c.fractions = value.get<std::array<double, 3>>();
      else if (key == "n_inject") c.n_inject = value.get<std::size_t>();
      else if (key == "scorer") c.scorer = value.get<std::string>();
      else if (key == "pca_components") c.pca_components = value.get<std::size_t>();
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else if (key == "baseline_percentile") c.baseline_percentile = value.get<double>();
      else if (key == "partition") c.partition = value.get<std::string>();
      else if (key == "out_dir") c.out_dir = value.get<std::string>();
      else if (key == "command" || key == "io") continue;
      else throw FormatError("unknown run config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad run config value: ") + e.what());
  }
}

void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  apply_json(c, j);
}

ae::AEConfig autoencoder_config(const RunConfig& c, std::size_t max_sent, std::size_t embed_dim) {
  ae::AEConfig a;
  a.max_sent = max_sent;
  a.embed_dim = embed_dim;
  a.latent_dim = c.latent_dim;
  a.channels = c.channels;
  a.kernel = c.kernel;
  a.stride = c.stride;
  a.padding = c.padding;
  a.epochs = c.ae_epochs;
  a.batch_size = c.batch_size;
  a.learning_rate = c.ae_learning_rate;
  a.masked_loss = c.masked_loss;
  a.seed = derive_seed(c.seed, "ae");
  return a;
}

classifier::LogRegConfig logreg_config(const RunConfig& c) {
  return {c.lambda, c.logreg_learning_rate, c.logreg_epochs, c.threshold,
          derive_seed(c.seed, "logreg")};
}

std::uint64_t split_seed(const RunConfig& c) { return derive_seed(c.seed, "split"); }
std::uint64_t oversample_seed(const RunConfig& c) { return derive_seed(c.seed, "oversample"); }
std::uint64_t inject_seed(const RunConfig& c) { return derive_seed(c.seed, "inject"); }

}  // namespace textlier::cli
