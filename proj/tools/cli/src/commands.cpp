#include "textlier/cli/commands.hpp"

#include <iostream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "textlier/baselines.hpp"
#include "textlier/corpus/embedder.hpp"
#include "textlier/corpus/io.hpp"
#include "textlier/corpus/sampling.hpp"
#include "textlier/error.hpp"

namespace textlier::cli {

using ordered_json = nlohmann::ordered_json;

int exit_code_for(const std::exception& e) noexcept {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return kFailure;
  switch (err->kind()) {
    case ErrorKind::argument: return kUsage;
    case ErrorKind::shape:
    case ErrorKind::format:
    case ErrorKind::io: return kFormat;
    case ErrorKind::numerical: return kNumerical;
    case ErrorKind::state: return kFailure;
  }
  return kFailure;
}

namespace {

fs::path sibling(const fs::path& primary, const std::string& name) {
  return primary.has_parent_path() ? primary.parent_path() / name : fs::path(name);
}

fs::path with_txt(fs::path p) { return p.replace_extension(".txt"); }

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw IoError(std::string(what) + " not found: " + p.string());
}

void write_resolved(const std::string& command, const RunConfig& config, const ordered_json& io,
                    const fs::path& primary_output) {
  ordered_json j = to_json(config);
  j["command"] = command;
  j["io"] = io;
  corpus::write_file_atomic(sibling(primary_output, command + ".config.json"), j.dump(2) + "\n");
}

std::string join_reals(const std::array<double, 3>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

std::array<double, 3> parse_fractions(const std::string& text) {
  std::array<double, 3> out{};
  std::istringstream in(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(in, item, ',')) {
    if (i == 3) throw FormatError("expected three split fractions, got '" + text + "'");
    out[i++] = parse_real(item);
  }
  if (i != 3) throw FormatError("expected three split fractions, got '" + text + "'");
  return out;
}

struct LoadedEmbeddings {
  corpus::EmbeddingFile file;
};

corpus::EmbeddingFile load_checked(const fs::path& path, std::optional<std::size_t> max_sent,
                                   std::optional<std::size_t> embed_dim, std::ostream& log) {
  require_file(path, "embedding file");
  corpus::EmbeddingFile file = corpus::load_embeddings(path, max_sent);
  if (file.documents.empty()) throw FormatError(path.string() + ": no documents");
  if (embed_dim && *embed_dim != file.header.embed_dim)
    throw FormatError(path.string() + ": embed_dim is " + std::to_string(file.header.embed_dim) +
                      ", expected " + std::to_string(*embed_dim));
  for (const auto& w : file.warnings) log << "warning: " << w << '\n';
  return file;
}

std::vector<LabeledFeature> labeled_features(const ae::AutoencoderModel& model,
                                             std::span<const corpus::EmbeddedDocument> docs) {
  std::vector<LabeledFeature> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back({model.featurize(d), d.label});
  return out;
}

std::vector<corpus::EmbeddedDocument> select_partition(const corpus::DatasetSplit& split,
                                                       const std::vector<corpus::EmbeddedDocument>& all,
                                                       const std::string& partition) {
  if (partition == "all") return all;
  return split.partition(corpus::parse_partition(partition));
}

}  // namespace

Checkpoint make_checkpoint(const eval::ModelBundle& bundle, const RunConfig& config) {
  if (!bundle.trained()) throw StateError("cannot checkpoint an untrained model bundle");
  Checkpoint ckpt;
  ckpt.config["run.seed"] = std::to_string(config.seed);
  ckpt.config["run.fractions"] = join_reals(config.fractions);
  bundle.autoencoder->to_checkpoint(ckpt);
  bundle.classifier->to_checkpoint(ckpt);
  return ckpt;
}

LoadedBundle load_bundle(const fs::path& checkpoint_path) {
  require_file(checkpoint_path, "checkpoint");
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  LoadedBundle loaded;
  try {
    loaded.run_seed = std::stoull(ckpt.value("run.seed"));
  } catch (const std::logic_error&) {
    throw FormatError(checkpoint_path.string() + ": 'run.seed' is not an integer");
  }
  loaded.fractions = parse_fractions(ckpt.value("run.fractions"));
  loaded.bundle.autoencoder = ae::AutoencoderModel::from_checkpoint(ckpt);
  loaded.bundle.classifier = classifier::LogisticModel::from_checkpoint(ckpt);
  if (loaded.bundle.classifier->dim() != loaded.bundle.autoencoder->config().latent_dim + 1)
    throw FormatError(checkpoint_path.string() +
                      ": classifier width does not match the autoencoder latent size + 1");
  return loaded;
}

void cmd_embed(const RunConfig& config, std::span<const fs::path> inputs,
               const std::optional<fs::path>& vectors, const fs::path& out, std::ostream& log) {
  if (inputs.empty()) throw ArgumentError("embed: at least one --input corpus is required");
  std::unique_ptr<corpus::EmbeddingProvider> provider;
  if (config.provider == "hash") {
    provider = std::make_unique<corpus::HashEmbedder>(config.embed_dim.value_or(768));
  } else if (config.provider == "file") {
    if (!vectors) throw ArgumentError("embed: the file provider needs --vectors");
    require_file(*vectors, "sentence vector table");
    auto table = corpus::TableEmbedder::load(*vectors);
    if (config.embed_dim && *config.embed_dim != table.embed_dim())
      throw FormatError(vectors->string() + ": vectors have dimension " +
                        std::to_string(table.embed_dim()) + ", expected " +
                        std::to_string(*config.embed_dim));
    provider = std::make_unique<corpus::TableEmbedder>(std::move(table));
  } else {
    throw ArgumentError("embed: unknown provider '" + config.provider + "' (expected hash or file)");
  }
  const std::size_t max_sent = config.max_sent.value_or(32);
  if (max_sent == 0) throw ArgumentError("max_sent must be at least 1");

  std::vector<corpus::RawDocument> docs;
  std::unordered_set<std::string> ids;
  for (const auto& in : inputs) {
    require_file(in, "corpus file");
    for (auto& d : corpus::read_raw_corpus(in)) {
      if (!ids.insert(d.id).second)
        throw FormatError(in.string() + ": duplicate document id '" + d.id + "'");
      docs.push_back(std::move(d));
    }
  }

  std::vector<corpus::EmbeddingRecord> records;
  records.reserve(docs.size());
  std::size_t sentences = 0;
  for (const auto& d : docs) {
    records.push_back(corpus::embed_sentences(d, *provider));
    sentences += records.back().sentences.size();
  }
  std::ostringstream body;
  corpus::write_embedding_records(body, {provider->embed_dim(), max_sent}, records);

  RunConfig resolved = config;
  resolved.max_sent = max_sent;
  resolved.embed_dim = provider->embed_dim();
  ordered_json io;
  std::vector<std::string> in_names;
  for (const auto& p : inputs) in_names.push_back(p.generic_string());
  io["inputs"] = in_names;
  if (vectors) io["vectors"] = vectors->generic_string();
  io["out"] = out.generic_string();

  corpus::write_file_atomic(out, body.str());
  write_resolved("embed", resolved, io, out);
  log << "embedded " << docs.size() << " documents, " << sentences << " sentences (provider "
      << provider->name() << ", dim " << provider->embed_dim() << ") -> " << out.string() << '\n';
}

void cmd_inject(const RunConfig& config, const fs::path& normal, const fs::path& outliers,
                const fs::path& out, std::ostream& log) {
  require_file(normal, "normal corpus");
  require_file(outliers, "outlier corpus");
  auto normal_docs = corpus::read_raw_corpus(normal);
  auto pool = corpus::read_raw_corpus(outliers);
  for (auto& d : normal_docs) d.source = corpus::Source::normal_corpus;
  for (auto& d : pool) d.source = corpus::Source::outlier_corpus;

  const auto combined =
      corpus::inject_outliers(normal_docs, pool, config.n_inject, inject_seed(config));
  std::ostringstream body;
  corpus::write_raw_corpus(body, combined);

  ordered_json io;
  io["normal"] = normal.generic_string();
  io["outliers"] = outliers.generic_string();
  io["out"] = out.generic_string();
  corpus::write_file_atomic(out, body.str());
  write_resolved("inject", config, io, out);
  log << "injected " << config.n_inject << " outliers into " << normal_docs.size()
      << " normal documents -> " << out.string() << '\n';
}

void cmd_split(const RunConfig& config, const fs::path& embeddings, const fs::path& out,
               std::ostream& log) {
  const auto file = load_checked(embeddings, config.max_sent, config.embed_dim, log);
  const auto split = corpus::stratified_split(file.documents, config.fractions, split_seed(config));

  ordered_json j;
  j["seed"] = config.seed;
  j["fractions"] = config.fractions;
  for (auto p : {corpus::Partition::train, corpus::Partition::validation, corpus::Partition::test}) {
    const auto& docs = split.partition(p);
    std::vector<std::string> ids;
    std::size_t outliers = 0;
    for (const auto& d : docs) {
      ids.push_back(d.id);
      outliers += static_cast<std::size_t>(d.label);
    }
    const std::string name(corpus::to_string(p));
    j["counts"][name] = {{"normal", docs.size() - outliers}, {"outlier", outliers}};
    j[name] = ids;
    log << name << ": " << docs.size() << " documents (" << outliers << " outliers)\n";
  }

  RunConfig resolved = config;
  resolved.max_sent = file.header.max_sent;
  resolved.embed_dim = file.header.embed_dim;
  corpus::write_file_atomic(out, j.dump(2) + "\n");
  write_resolved("split", resolved,
                 ordered_json{{"embeddings", embeddings.generic_string()},
                              {"out", out.generic_string()}},
                 out);
}

void cmd_train(const RunConfig& config, const fs::path& embeddings, const fs::path& out,
               std::ostream& log) {
  const auto file = load_checked(embeddings, config.max_sent, config.embed_dim, log);
  const auto split = corpus::stratified_split(file.documents, config.fractions, split_seed(config));
  if (split.train.empty()) throw ArgumentError("train: the training partition is empty");

  const ae::AEConfig ae_config =
      autoencoder_config(config, file.header.max_sent, file.header.embed_dim);
  eval::ModelBundle bundle;
  bundle.autoencoder = ae::train_autoencoder(split.train, ae_config);
  const auto features = labeled_features(*bundle.autoencoder, split.train);
  const auto balanced = corpus::oversample(features, oversample_seed(config));
  bundle.classifier = classifier::train_logreg(balanced, logreg_config(config));

  RunConfig resolved = config;
  resolved.max_sent = file.header.max_sent;
  resolved.embed_dim = file.header.embed_dim;
  const Checkpoint ckpt = make_checkpoint(bundle, resolved);
  std::ostringstream body;
  write_checkpoint(body, ckpt);

  corpus::write_file_atomic(out, body.str());
  write_resolved("train", resolved,
                 ordered_json{{"embeddings", embeddings.generic_string()},
                              {"out", out.generic_string()}},
                 out);
  log << "autoencoder: " << split.train.size() << " training documents, final epoch loss "
      << format_real(bundle.autoencoder->training_log.back()) << '\n'
      << "classifier: " << balanced.size() << " oversampled rows, loss "
      << format_real(bundle.classifier->initial_loss) << " -> "
      << format_real(bundle.classifier->final_loss) << ", gradient norm "
      << format_real(bundle.classifier->gradient_norm) << '\n'
      << "checkpoint -> " << out.string() << '\n';
}

void cmd_score(const RunConfig& config, const fs::path& checkpoint, const fs::path& embeddings,
               const fs::path& out, std::ostream& log) {
  const LoadedBundle loaded = load_bundle(checkpoint);
  const auto& model = *loaded.bundle.autoencoder;
  const auto file =
      load_checked(embeddings, model.config().max_sent, model.config().embed_dim, log);

  std::ostringstream body;
  for (const auto& doc : file.documents) {
    const FeatureVector f = model.featurize(doc);
    ordered_json j;
    j["id"] = doc.id;
    j["score"] = f.recon_error;
    j["scorer"] = baselines::to_string(baselines::Scorer::ae_recon);
    j["probability"] = loaded.bundle.classifier->predict_proba(f);
    j["prediction"] = loaded.bundle.classifier->predict(f);
    body << j.dump() << '\n';
  }
  corpus::write_file_atomic(out, body.str());
  write_resolved("score", config,
                 ordered_json{{"checkpoint", checkpoint.generic_string()},
                              {"embeddings", embeddings.generic_string()},
                              {"out", out.generic_string()}},
                 out);
  log << "scored " << file.documents.size() << " documents -> " << out.string() << '\n';
}

eval::EvalReport cmd_eval(const RunConfig& config, const fs::path& checkpoint,
                          const fs::path& embeddings, const fs::path& out, std::ostream& log) {
  const LoadedBundle loaded = load_bundle(checkpoint);
  const auto& model = *loaded.bundle.autoencoder;
  const auto file =
      load_checked(embeddings, model.config().max_sent, model.config().embed_dim, log);
  const auto split = corpus::stratified_split(file.documents, loaded.fractions,
                                              derive_seed(loaded.run_seed, "split"));
  const auto docs = select_partition(split, file.documents, config.partition);
  const eval::EvalReport report = eval::evaluate_documents(loaded.bundle, docs);

  const std::string item = embeddings.stem().string();
  ordered_json j = eval::to_json(report, item);
  j["partition"] = config.partition;
  const std::string table = eval::to_table(report, item);
  corpus::write_file_atomic(out, j.dump(2) + "\n");
  corpus::write_file_atomic(with_txt(out), table);
  write_resolved("eval", config,
                 ordered_json{{"checkpoint", checkpoint.generic_string()},
                              {"embeddings", embeddings.generic_string()},
                              {"out", out.generic_string()}},
                 out);
  log << table;
  return report;
}

eval::EvalReport cmd_baseline(const RunConfig& config, const fs::path& embeddings,
                              const fs::path& scores_out, const fs::path& report_out,
                              std::ostream& log) {
  const auto scorer = baselines::parse_scorer(config.scorer);
  if (scorer == baselines::Scorer::ae_recon)
    throw ArgumentError("baseline: scorer must be mahalanobis or pca");
  const auto file = load_checked(embeddings, config.max_sent, config.embed_dim, log);
  const auto split = corpus::stratified_split(file.documents, config.fractions, split_seed(config));
  if (split.train.size() < 2) throw ArgumentError("baseline: need at least two training documents");

  const auto train_vectors = baselines::pool_all(split.train);
  baselines::BaselineModel model;
  std::size_t k = 0;
  if (scorer == baselines::Scorer::mahalanobis) {
    auto g = baselines::fit_gaussian(train_vectors, config.epsilon);
    for (const auto& w : g.warnings) log << "warning: " << w << '\n';
    model = std::move(g);
  } else {
    k = std::min(config.pca_components, file.header.embed_dim);
    model = baselines::fit_pca(train_vectors, k);
  }
  const auto train_scores = baselines::score_corpus(model, split.train);
  std::vector<double> train_values;
  for (const auto& s : train_scores) train_values.push_back(s.score);
  const double threshold = baselines::percentile(train_values, config.baseline_percentile);

  const auto all_scores = baselines::score_corpus(model, file.documents);
  std::ostringstream body;
  for (const auto& s : all_scores) {
    ordered_json j;
    j["id"] = s.doc_id;
    j["score"] = s.score;
    j["scorer"] = baselines::to_string(s.scorer);
    body << j.dump() << '\n';
  }

  const auto docs = select_partition(split, file.documents, config.partition);
  const auto part_scores = baselines::score_corpus(model, docs);
  const auto predictions = baselines::threshold_predict(part_scores, threshold);
  std::vector<int> labels;
  for (const auto& d : docs) labels.push_back(d.label);
  const eval::EvalReport report = eval::metrics(eval::confusion(labels, predictions));

  const std::string item = embeddings.stem().string() + " [" +
                           std::string(baselines::to_string(scorer)) + "]";
  ordered_json rj = eval::to_json(report, item);
  rj["partition"] = config.partition;
  rj["scorer"] = baselines::to_string(scorer);
  rj["threshold"] = threshold;
  rj["threshold_percentile"] = config.baseline_percentile;
  if (scorer == baselines::Scorer::pca_recon) rj["components"] = k;
  const std::string table = eval::to_table(report, item);

  RunConfig resolved = config;
  resolved.max_sent = file.header.max_sent;
  resolved.embed_dim = file.header.embed_dim;
  corpus::write_file_atomic(scores_out, body.str());
  corpus::write_file_atomic(report_out, rj.dump(2) + "\n");
  corpus::write_file_atomic(with_txt(report_out), table);
  write_resolved("baseline", resolved,
                 ordered_json{{"embeddings", embeddings.generic_string()},
                              {"scores", scores_out.generic_string()},
                              {"report", report_out.generic_string()}},
                 report_out);
  log << table;
  return report;
}

}  // namespace textlier::cli
