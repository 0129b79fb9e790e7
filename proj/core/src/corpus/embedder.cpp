#include "textlier/corpus/embedder.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "textlier/error.hpp"
#include "textlier/random.hpp"

namespace textlier::corpus {

std::vector<double> hash_embed(std::string_view sentence, std::size_t dim) {
  if (dim == 0) throw ArgumentError("hash_embed: dim must be at least 1");
  std::vector<double> out(dim, 0.0);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = fnv1a64(token);
    const double sign = (h & 1U) ? -1.0 : 1.0;
    out[(h >> 1) % dim] += sign;
    token.clear();
  };
  for (char c : sentence) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else {
      token.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  flush();

  double norm = 0.0;
  for (double v : out) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : out) v /= norm;
  }
  return out;
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ArgumentError("hash embedder: dim must be at least 1");
}

TableEmbedder::TableEmbedder(std::size_t dim,
                             std::unordered_map<std::string, std::vector<double>> table)
    : dim_(dim), table_(std::move(table)) {
  if (dim_ == 0) throw ArgumentError("table embedder: dim must be at least 1");
  for (const auto& [sentence, vec] : table_)
    if (vec.size() != dim_)
      throw FormatError("table embedder: vector for '" + sentence + "' has " +
                        std::to_string(vec.size()) + " values, expected " + std::to_string(dim_));
}

TableEmbedder TableEmbedder::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sentence vector table " + path.string());
  std::unordered_map<std::string, std::vector<double>> table;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    std::string sentence;
    std::vector<double> vec;
    try {
      const auto j = nlohmann::json::parse(line);
      sentence = j.at("sentence").get<std::string>();
      vec = j.at("vector").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + e.what());
    }
    if (dim == 0) dim = vec.size();
    if (vec.empty() || vec.size() != dim)
      throw FormatError(where + "vector has " + std::to_string(vec.size()) + " values, expected " +
                        std::to_string(dim));
    if (!table.emplace(std::move(sentence), std::move(vec)).second)
      throw FormatError(where + "duplicate sentence");
  }
  if (table.empty()) throw FormatError(path.string() + ": sentence vector table is empty");
  return TableEmbedder(dim, std::move(table));
}

std::vector<double> TableEmbedder::embed(std::string_view sentence) const {
  auto it = table_.find(std::string(sentence));
  if (it == table_.end())
    throw FormatError("sentence vector table has no entry for '" + std::string(sentence) + "'");
  return it->second;
}

EmbeddingRecord embed_sentences(const RawDocument& doc, const EmbeddingProvider& provider,
                                const SentenceSplitter& splitter) {
  const auto sentences = splitter(doc.text);
  if (sentences.empty()) throw ArgumentError("document '" + doc.id + "' has no sentences");
  EmbeddingRecord record{doc.id, label_of(doc.source), {}};
  record.sentences.reserve(sentences.size());
  for (const auto& s : sentences) {
    auto vec = provider.embed(s);
    if (vec.size() != provider.embed_dim())
      throw ShapeError("provider " + provider.name() + " returned " + std::to_string(vec.size()) +
                       " values, expected " + std::to_string(provider.embed_dim()));
    record.sentences.push_back(std::move(vec));
  }
  return record;
}

EmbeddedDocument embed_document(const RawDocument& doc, const EmbeddingProvider& provider,
                                std::size_t max_sent, const SentenceSplitter& splitter) {
  if (max_sent == 0) throw ArgumentError("max_sent must be at least 1");
  return to_embedded(embed_sentences(doc, provider, splitter), max_sent);
}

}  // namespace textlier::corpus
