#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textlier/nn/tensor.hpp"

namespace textlier::corpus {

enum class Source { normal_corpus, outlier_corpus };

std::string_view to_string(Source source) noexcept;
/// Accepts "normal" or "outlier".
Source parse_source(std::string_view text);
/// normal_corpus -> 0, outlier_corpus -> 1.
int label_of(Source source) noexcept;

struct RawDocument {
  std::string id;
  std::string text;
  Source source = Source::normal_corpus;

  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

/// Stored sentence embeddings of one document, before padding/truncation.
struct EmbeddingRecord {
  std::string id;
  int label = 0;
  std::vector<std::vector<double>> sentences;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// A document as a fixed (max_sent, embed_dim) matrix. Rows at or beyond
/// sentence_count are exactly zero.
struct EmbeddedDocument {
  std::string id;
  int label = 0;
  /// Number of content rows: the stored sentence count capped at max_sent.
  std::size_t sentence_count = 0;
  nn::Tensor matrix;

  std::size_t max_sent() const { return matrix.dim(0); }
  std::size_t embed_dim() const { return matrix.dim(1); }
  std::span<const double> row(std::size_t i) const {
    return matrix.data().subspan(i * embed_dim(), embed_dim());
  }

  friend bool operator==(const EmbeddedDocument&, const EmbeddedDocument&) = default;
};

/// Pads or truncates `record` to max_sent rows. Throws ArgumentError for an
/// empty record, a bad label or non-finite values; ShapeError for ragged rows.
EmbeddedDocument to_embedded(const EmbeddingRecord& record, std::size_t max_sent);
/// Content rows of `doc` as a record.
EmbeddingRecord to_record(const EmbeddedDocument& doc);

enum class Partition { train, validation, test };

std::string_view to_string(Partition partition) noexcept;
Partition parse_partition(std::string_view text);

struct DatasetSplit {
  std::vector<EmbeddedDocument> train;
  std::vector<EmbeddedDocument> validation;
  std::vector<EmbeddedDocument> test;
  std::uint64_t seed = 0;
  std::array<double, 3> fractions{1.0, 0.0, 0.0};

  const std::vector<EmbeddedDocument>& partition(Partition p) const;
};

}  // namespace textlier::corpus
