#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "textlier/baselines.hpp"
#include "textlier/cli/commands.hpp"
#include "textlier/error.hpp"

namespace textlier::cli {

namespace {

// Flag values stay unset unless given, so that a --config file is only
// overridden by what the user actually typed.
struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> max_sent;
  std::optional<std::size_t> embed_dim;
  std::optional<std::string> provider;
  std::optional<std::size_t> latent_dim;
  std::optional<std::size_t> ae_epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> ae_learning_rate;
  bool masked_loss = false;
  std::optional<double> lambda;
  std::optional<double> logreg_learning_rate;
  std::optional<std::size_t> logreg_epochs;
  std::optional<double> threshold;
  std::optional<std::vector<double>> fractions;
  std::optional<std::size_t> n_inject;
  std::optional<std::string> scorer;
  std::optional<std::size_t> pca_components;
  std::optional<double> epsilon;
  std::optional<double> percentile;
  std::optional<std::string> partition;

  std::vector<std::string> inputs;
  std::string vectors, normal, outliers, embeddings, checkpoint, out, report;
};

template <typename T>
void set_if(T& target, const std::optional<T>& value) {
  if (value) target = *value;
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.config) apply_config_file(c, *f.config);
  set_if(c.seed, f.seed);
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.max_sent) c.max_sent = f.max_sent;
  if (f.embed_dim) c.embed_dim = f.embed_dim;
  set_if(c.provider, f.provider);
  set_if(c.latent_dim, f.latent_dim);
  set_if(c.ae_epochs, f.ae_epochs);
  set_if(c.batch_size, f.batch_size);
  set_if(c.ae_learning_rate, f.ae_learning_rate);
  if (f.masked_loss) c.masked_loss = true;
  set_if(c.lambda, f.lambda);
  set_if(c.logreg_learning_rate, f.logreg_learning_rate);
  set_if(c.logreg_epochs, f.logreg_epochs);
  set_if(c.threshold, f.threshold);
  if (f.fractions) {
    if (f.fractions->size() != 3) throw ArgumentError("--fractions takes exactly three values");
    std::copy(f.fractions->begin(), f.fractions->end(), c.fractions.begin());
  }
  set_if(c.n_inject, f.n_inject);
  set_if(c.scorer, f.scorer);
  set_if(c.pca_components, f.pca_components);
  set_if(c.epsilon, f.epsilon);
  set_if(c.baseline_percentile, f.percentile);
  set_if(c.partition, f.partition);
  return c;
}

fs::path output_path(const RunConfig& c, const std::string& explicit_out, const std::string& name) {
  return explicit_out.empty() ? c.out_dir / name : fs::path(explicit_out);
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "Run seed (default 42)");
  sub->add_option("--config", f.config, "JSON run config applied before flags");
  sub->add_option("--out-dir", f.out_dir, "Directory for default output names");
  sub->add_option("--max-sent", f.max_sent, "Sentence rows per document")->check(CLI::PositiveNumber);
  sub->add_option("--embed-dim", f.embed_dim, "Sentence embedding dimension")
      ->check(CLI::PositiveNumber);
}

void add_split_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--fractions", f.fractions, "train,validation,test fractions")
      ->delimiter(',')
      ->expected(3);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"textlier: sentence-embedding autoencoder outlier detection"};
  app.name(args.empty() ? "textlier" : args.front());
  app.require_subcommand(1);
  Flags f;

  auto* embed = app.add_subcommand("embed", "Split and embed raw JSONL corpora");
  add_common(embed, f);
  embed->add_option("--input", f.inputs, "Raw corpus JSONL (repeatable)")->required();
  embed->add_option("--provider", f.provider, "hash or file");
  embed->add_option("--vectors", f.vectors, "Sentence vector table for the file provider");
  embed->add_option("--out", f.out, "Output embeddings (default embeddings.jsonl)");

  auto* inject = app.add_subcommand("inject", "Mix outlier documents into a normal corpus");
  add_common(inject, f);
  inject->add_option("--normal", f.normal, "Normal corpus JSONL")->required();
  inject->add_option("--outliers", f.outliers, "Outlier pool JSONL")->required();
  inject->add_option("--n", f.n_inject, "Number of outliers to inject (default 1000)");
  inject->add_option("--out", f.out, "Output corpus (default corpus.jsonl)");

  auto* split = app.add_subcommand("split", "Report the stratified train/validation/test split");
  add_common(split, f);
  add_split_flags(split, f);
  split->add_option("--embeddings", f.embeddings, "Embedding file")->required();
  split->add_option("--out", f.out, "Output split listing (default split.json)");

  auto* train = app.add_subcommand("train", "Train the autoencoder and classifier");
  add_common(train, f);
  add_split_flags(train, f);
  train->add_option("--embeddings", f.embeddings, "Embedding file")->required();
  train->add_option("--latent-dim", f.latent_dim, "Latent size")->check(CLI::PositiveNumber);
  train->add_option("--epochs", f.ae_epochs, "Autoencoder epochs")->check(CLI::PositiveNumber);
  train->add_option("--batch-size", f.batch_size, "Autoencoder batch size")
      ->check(CLI::PositiveNumber);
  train->add_option("--learning-rate", f.ae_learning_rate, "Autoencoder Adam step size");
  train->add_flag("--masked-loss", f.masked_loss, "Ignore padded rows in the training loss");
  train->add_option("--lambda", f.lambda, "L2 penalty of the classifier");
  train->add_option("--logreg-learning-rate", f.logreg_learning_rate, "Classifier step size");
  train->add_option("--logreg-epochs", f.logreg_epochs, "Classifier iterations");
  train->add_option("--threshold", f.threshold, "Decision threshold on the probability");
  train->add_option("--out", f.out, "Output checkpoint (default checkpoint.txt)");

  auto* score = app.add_subcommand("score", "Score documents with a trained checkpoint");
  add_common(score, f);
  score->add_option("--checkpoint", f.checkpoint, "Checkpoint file")->required();
  score->add_option("--embeddings", f.embeddings, "Embedding file")->required();
  score->add_option("--out", f.out, "Output scores (default scores.jsonl)");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on one partition");
  add_common(eval, f);
  eval->add_option("--checkpoint", f.checkpoint, "Checkpoint file")->required();
  eval->add_option("--embeddings", f.embeddings, "Embedding file")->required();
  eval->add_option("--partition", f.partition, "train, validation, test or all");
  eval->add_option("--out", f.out, "Output report (default report.json)");

  auto* baseline = app.add_subcommand("baseline", "Fit and evaluate a Mahalanobis or PCA baseline");
  add_common(baseline, f);
  add_split_flags(baseline, f);
  baseline->add_option("--embeddings", f.embeddings, "Embedding file")->required();
  baseline->add_option("--scorer", f.scorer, "mahalanobis or pca");
  baseline->add_option("--components", f.pca_components, "PCA components")
      ->check(CLI::PositiveNumber);
  baseline->add_option("--epsilon", f.epsilon, "Covariance ridge");
  baseline->add_option("--percentile", f.percentile, "Threshold percentile of training scores")
      ->check(CLI::Range(0.0, 100.0));
  baseline->add_option("--partition", f.partition, "train, validation, test or all");
  baseline->add_option("--out", f.out, "Output scores (default baseline_<scorer>_scores.jsonl)");
  baseline->add_option("--report", f.report, "Output report (default baseline_<scorer>_report.json)");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    const RunConfig c = resolve(f);
    if (c.partition != "all") corpus::parse_partition(c.partition);
    if (*embed) {
      std::vector<fs::path> inputs(f.inputs.begin(), f.inputs.end());
      std::optional<fs::path> vectors;
      if (!f.vectors.empty()) vectors = f.vectors;
      cmd_embed(c, inputs, vectors, output_path(c, f.out, "embeddings.jsonl"), out);
    } else if (*inject) {
      cmd_inject(c, f.normal, f.outliers, output_path(c, f.out, "corpus.jsonl"), out);
    } else if (*split) {
      cmd_split(c, f.embeddings, output_path(c, f.out, "split.json"), out);
    } else if (*train) {
      cmd_train(c, f.embeddings, output_path(c, f.out, "checkpoint.txt"), out);
    } else if (*score) {
      cmd_score(c, f.checkpoint, f.embeddings, output_path(c, f.out, "scores.jsonl"), out);
    } else if (*eval) {
      cmd_eval(c, f.checkpoint, f.embeddings, output_path(c, f.out, "report.json"), out);
    } else if (*baseline) {
      const std::string tag(baselines::to_string(baselines::parse_scorer(c.scorer)));
      cmd_baseline(c, f.embeddings, output_path(c, f.out, "baseline_" + tag + "_scores.jsonl"),
                   output_path(c, f.report, "baseline_" + tag + "_report.json"), out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kSuccess;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace textlier::cli
