#include "textlier/corpus/document.hpp"

#include <algorithm>
#include <cmath>

#include "textlier/error.hpp"

namespace textlier::corpus {

std::string_view to_string(Source source) noexcept {
  return source == Source::normal_corpus ? "normal" : "outlier";
}

Source parse_source(std::string_view text) {
  if (text == "normal") return Source::normal_corpus;
  if (text == "outlier") return Source::outlier_corpus;
  throw ArgumentError("unknown document source '" + std::string(text) +
                      "' (expected normal or outlier)");
}

int label_of(Source source) noexcept { return source == Source::outlier_corpus ? 1 : 0; }

EmbeddedDocument to_embedded(const EmbeddingRecord& record, std::size_t max_sent) {
  if (max_sent == 0) throw ArgumentError("max_sent must be at least 1");
  if (record.sentences.empty())
    throw ArgumentError("document '" + record.id + "' has no sentences");
  if (record.label != 0 && record.label != 1)
    throw ArgumentError("document '" + record.id + "' has label " + std::to_string(record.label) +
                        " (expected 0 or 1)");
  const std::size_t dim = record.sentences.front().size();
  if (dim == 0) throw ShapeError("document '" + record.id + "' has empty sentence vectors");

  EmbeddedDocument doc;
  doc.id = record.id;
  doc.label = record.label;
  doc.sentence_count = std::min(record.sentences.size(), max_sent);
  doc.matrix = nn::Tensor({max_sent, dim});
  for (std::size_t r = 0; r < record.sentences.size(); ++r) {
    const auto& row = record.sentences[r];
    if (row.size() != dim)
      throw ShapeError("document '" + record.id + "' sentence " + std::to_string(r) + " has " +
                       std::to_string(row.size()) + " values, expected " + std::to_string(dim));
    for (double v : row)
      if (!std::isfinite(v))
        throw ArgumentError("document '" + record.id + "' contains a non-finite value");
    if (r < max_sent) std::copy(row.begin(), row.end(), doc.matrix.data().begin() + r * dim);
  }
  return doc;
}

EmbeddingRecord to_record(const EmbeddedDocument& doc) {
  EmbeddingRecord record{doc.id, doc.label, {}};
  record.sentences.reserve(doc.sentence_count);
  for (std::size_t r = 0; r < doc.sentence_count; ++r) {
    auto row = doc.row(r);
    record.sentences.emplace_back(row.begin(), row.end());
  }
  return record;
}

std::string_view to_string(Partition partition) noexcept {
  switch (partition) {
    case Partition::train: return "train";
    case Partition::validation: return "validation";
    case Partition::test: return "test";
  }
  return "train";
}

Partition parse_partition(std::string_view text) {
  if (text == "train") return Partition::train;
  if (text == "validation") return Partition::validation;
  if (text == "test") return Partition::test;
  throw ArgumentError("unknown partition '" + std::string(text) +
                      "' (expected train, validation or test)");
}

const std::vector<EmbeddedDocument>& DatasetSplit::partition(Partition p) const {
  switch (p) {
    case Partition::train: return train;
    case Partition::validation: return validation;
    case Partition::test: return test;
  }
  return train;
}

}  // namespace textlier::corpus
