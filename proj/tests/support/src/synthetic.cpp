#include "textlier_test/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "textlier/corpus/embedder.hpp"
#include "textlier/corpus/io.hpp"
#include "textlier/random.hpp"

namespace textlier::test {

SyntheticCorpus make_synthetic(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t d = spec.embed_dim, r = spec.rank;

  std::vector<double> mixing(d * r);
  for (double& a : mixing) a = gauss(rng) * 0.5 / std::sqrt(static_cast<double>(r));
  std::vector<double> offset(d);
  double norm = 0.0;
  for (double& o : offset) {
    o = gauss(rng);
    norm += o * o;
  }
  for (double& o : offset) o *= spec.shift / std::sqrt(norm);

  std::uniform_int_distribution<std::size_t> length(spec.min_sentences, spec.max_sentences);
  SyntheticCorpus out;
  out.embed_dim = d;

  auto make_doc = [&](const std::string& id, bool outlier) {
    corpus::RawDocument doc{id, "", outlier ? corpus::Source::outlier_corpus
                                            : corpus::Source::normal_corpus};
    const std::size_t n = length(rng);
    for (std::size_t s = 0; s < n; ++s) {
      const std::string sentence = id + " part " + std::to_string(s);
      std::vector<double> z(r);
      for (double& v : z) v = gauss(rng);
      std::vector<double> v(d);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = spec.noise * gauss(rng);
        for (std::size_t k = 0; k < r; ++k) acc += mixing[i * r + k] * z[k];
        v[i] = acc + (outlier ? offset[i] : 0.0);
      }
      out.vectors.emplace_back(sentence, std::move(v));
      doc.text += (s > 0 ? " " : "") + sentence + ".";
    }
    return doc;
  };

  for (std::size_t i = 0; i < spec.n_normal; ++i)
    out.normal.push_back(make_doc("n" + std::to_string(i), false));
  for (std::size_t i = 0; i < spec.n_outlier; ++i)
    out.outliers.push_back(make_doc("o" + std::to_string(i), true));
  return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write_docs = [](const std::vector<corpus::RawDocument>& docs,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    corpus::write_raw_corpus(out, docs);
  };
  write_docs(corpus.normal, dir / "normal.jsonl");
  write_docs(corpus.outliers, dir / "outliers.jsonl");
  std::ofstream out(dir / "vectors.jsonl", std::ios::binary);
  for (const auto& [sentence, vec] : corpus.vectors) {
    nlohmann::ordered_json j;
    j["sentence"] = sentence;
    j["vector"] = vec;
    out << j.dump() << '\n';
  }
}

std::vector<corpus::EmbeddedDocument> embed_synthetic(const SyntheticCorpus& corpus,
                                                      std::size_t max_sent) {
  std::unordered_map<std::string, std::vector<double>> table(corpus.vectors.begin(),
                                                             corpus.vectors.end());
  const corpus::TableEmbedder embedder(corpus.embed_dim, std::move(table));
  std::vector<corpus::EmbeddedDocument> out;
  for (const auto* docs : {&corpus.normal, &corpus.outliers})
    for (const auto& doc : *docs) out.push_back(corpus::embed_document(doc, embedder, max_sent));
  return out;
}

}  // namespace textlier::test
