#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textlier/corpus/document.hpp"
#include "textlier/corpus/sentences.hpp"

namespace textlier::corpus {

/// Maps a sentence to a fixed-length vector. Implementations must be
/// deterministic and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t embed_dim() const noexcept = 0;
  virtual std::string name() const = 0;
  virtual std::vector<double> embed(std::string_view sentence) const = 0;
};

/// Signed feature hashing of lowercased whitespace tokens, L2-normalised.
/// Token hash is 64-bit FNV-1a; the low bit picks the sign (0 -> +1) and the
/// remaining bits modulo dim pick the bucket. An empty token set yields zeros.
std::vector<double> hash_embed(std::string_view sentence, std::size_t dim);

class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(std::size_t dim);
  std::size_t embed_dim() const noexcept override { return dim_; }
  std::string name() const override { return "hash"; }
  std::vector<double> embed(std::string_view sentence) const override {
    return hash_embed(sentence, dim_);
  }

 private:
  std::size_t dim_;
};

/// Looks sentences up in a precomputed table, e.g. vectors exported by an
/// external sentence encoder. Table files are JSON lines of
/// {"sentence": str, "vector": [real x dim]}.
class TableEmbedder final : public EmbeddingProvider {
 public:
  TableEmbedder(std::size_t dim, std::unordered_map<std::string, std::vector<double>> table);
  static TableEmbedder load(const std::filesystem::path& path);

  std::size_t embed_dim() const noexcept override { return dim_; }
  std::string name() const override { return "file"; }
  /// Throws FormatError for a sentence absent from the table.
  std::vector<double> embed(std::string_view sentence) const override;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

/// Splits and embeds every sentence of `doc`; the label follows the source.
EmbeddingRecord embed_sentences(const RawDocument& doc, const EmbeddingProvider& provider,
                                const SentenceSplitter& splitter = split_sentences);

/// embed_sentences followed by padding/truncation to max_sent rows.
EmbeddedDocument embed_document(const RawDocument& doc, const EmbeddingProvider& provider,
                                std::size_t max_sent,
                                const SentenceSplitter& splitter = split_sentences);

}  // namespace textlier::corpus
