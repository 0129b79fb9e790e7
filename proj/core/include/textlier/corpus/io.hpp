#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textlier/corpus/document.hpp"

namespace textlier::corpus {

inline constexpr const char* kEmbeddingFormat = "textlier-emb";
inline constexpr int kEmbeddingVersion = 1;

struct EmbeddingHeader {
  std::size_t embed_dim = 0;
  std::size_t max_sent = 0;
};

struct EmbeddingFile {
  EmbeddingHeader header;
  std::vector<EmbeddedDocument> documents;
  /// Non-fatal findings, e.g. documents truncated to max_sent.
  std::vector<std::string> warnings;
};

/// Writes the canonical JSON-lines embedding file: one header object, then one
/// {"id", "label", "sentences"} object per document.
void write_embedding_records(std::ostream& out, const EmbeddingHeader& header,
                             std::span<const EmbeddingRecord> records);

/// Reads an embedding file, padding/truncating every document to `max_sent`
/// (the header's value when not given). An empty stream yields no documents.
/// Throws FormatError citing `source_name` and the line number on bad input.
EmbeddingFile read_embedding_stream(std::istream& in, const std::string& source_name,
                                    std::optional<std::size_t> max_sent = std::nullopt);

EmbeddingFile load_embeddings(const std::filesystem::path& path,
                              std::optional<std::size_t> max_sent = std::nullopt);

std::vector<EmbeddedDocument> read_embeddings(const std::filesystem::path& path,
                                              std::optional<std::size_t> max_sent = std::nullopt);

/// All documents must share one (max_sent, embed_dim). For an empty list the
/// header dimensions come from `empty_header`.
void write_embeddings(std::span<const EmbeddedDocument> docs, const std::filesystem::path& path,
                      const EmbeddingHeader& empty_header = {1, 1});

/// Raw corpora are JSON lines of {"id", "text", "source"}; `source` is
/// "normal" or "outlier" and defaults to `default_source` when absent.
std::vector<RawDocument> read_raw_corpus(const std::filesystem::path& path,
                                         Source default_source = Source::normal_corpus);
std::vector<RawDocument> read_raw_corpus_stream(std::istream& in, const std::string& source_name,
                                                Source default_source = Source::normal_corpus);
void write_raw_corpus(std::ostream& out, std::span<const RawDocument> docs);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace textlier::corpus
