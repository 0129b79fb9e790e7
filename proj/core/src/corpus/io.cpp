#include "textlier/corpus/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "textlier/error.hpp"

namespace textlier::corpus {

using ordered_json = nlohmann::ordered_json;

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::size_t positive_size(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw FormatError(where + "header field '" + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

}  // namespace

void write_embedding_records(std::ostream& out, const EmbeddingHeader& header,
                             std::span<const EmbeddingRecord> records) {
  ordered_json head;
  head["format"] = kEmbeddingFormat;
  head["version"] = kEmbeddingVersion;
  head["embed_dim"] = header.embed_dim;
  head["max_sent"] = header.max_sent;
  out << head.dump() << '\n';
  for (const auto& r : records) {
    for (const auto& s : r.sentences)
      if (s.size() != header.embed_dim)
        throw ShapeError("document '" + r.id + "' has a sentence of " + std::to_string(s.size()) +
                         " values, header says " + std::to_string(header.embed_dim));
    ordered_json line;
    line["id"] = r.id;
    line["label"] = r.label;
    line["sentences"] = r.sentences;
    out << line.dump() << '\n';
  }
}

EmbeddingFile read_embedding_stream(std::istream& in, const std::string& source_name,
                                    std::optional<std::size_t> max_sent) {
  EmbeddingFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::unordered_set<std::string> ids;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + "malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw FormatError(where + "expected a JSON object");

    if (!have_header) {
      try {
        if (j.at("format") != kEmbeddingFormat)
          throw FormatError(where + "not a " + kEmbeddingFormat + " file");
        if (j.at("version") != kEmbeddingVersion)
          throw FormatError(where + "unsupported version " + j.at("version").dump());
        file.header.embed_dim = positive_size(j, "embed_dim", where);
        file.header.max_sent = positive_size(j, "max_sent", where);
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(where + "bad header (" + e.what() + ")");
      }
      if (max_sent && *max_sent == 0) throw ArgumentError("max_sent must be at least 1");
      have_header = true;
      continue;
    }

    EmbeddingRecord record;
    try {
      record.id = j.at("id").get<std::string>();
      record.label = j.at("label").get<int>();
      const auto& sentences = j.at("sentences");
      if (!sentences.is_array()) throw FormatError(where + "'sentences' must be an array");
      for (const auto& row : sentences) {
        if (!row.is_array()) throw FormatError(where + "each sentence must be an array of reals");
        std::vector<double> values;
        values.reserve(row.size());
        for (const auto& v : row) {
          if (!v.is_number()) throw FormatError(where + "sentence values must be numbers");
          values.push_back(v.get<double>());
        }
        if (values.size() != file.header.embed_dim)
          throw FormatError(where + "sentence " + std::to_string(record.sentences.size()) +
                            " has " + std::to_string(values.size()) +
                            " values, header embed_dim is " +
                            std::to_string(file.header.embed_dim));
        record.sentences.push_back(std::move(values));
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + "bad document (" + e.what() + ")");
    }
    if (record.sentences.empty()) throw FormatError(where + "document has no sentences");
    if (record.label != 0 && record.label != 1)
      throw FormatError(where + "label must be 0 or 1");
    if (!ids.insert(record.id).second)
      throw FormatError(where + "duplicate document id '" + record.id + "'");

    const std::size_t rows = max_sent.value_or(file.header.max_sent);
    if (record.sentences.size() > rows)
      file.warnings.push_back(where + "document '" + record.id + "' truncated from " +
                              std::to_string(record.sentences.size()) + " to " +
                              std::to_string(rows) + " sentences");
    try {
      file.documents.push_back(to_embedded(record, rows));
    } catch (const Error& e) {
      throw FormatError(where + e.what());
    }
  }
  if (have_header && max_sent) file.header.max_sent = *max_sent;
  return file;
}

EmbeddingFile load_embeddings(const std::filesystem::path& path,
                              std::optional<std::size_t> max_sent) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  return read_embedding_stream(in, path.string(), max_sent);
}

std::vector<EmbeddedDocument> read_embeddings(const std::filesystem::path& path,
                                              std::optional<std::size_t> max_sent) {
  return load_embeddings(path, max_sent).documents;
}

void write_embeddings(std::span<const EmbeddedDocument> docs, const std::filesystem::path& path,
                      const EmbeddingHeader& empty_header) {
  EmbeddingHeader header = empty_header;
  if (!docs.empty()) header = {docs.front().embed_dim(), docs.front().max_sent()};
  std::vector<EmbeddingRecord> records;
  records.reserve(docs.size());
  for (const auto& d : docs) {
    if (d.embed_dim() != header.embed_dim || d.max_sent() != header.max_sent)
      throw ShapeError("write_embeddings: document '" + d.id + "' has a different matrix shape");
    records.push_back(to_record(d));
  }
  std::ostringstream out;
  write_embedding_records(out, header, records);
  write_file_atomic(path, out.str());
}

std::vector<RawDocument> read_raw_corpus_stream(std::istream& in, const std::string& source_name,
                                                Source default_source) {
  std::vector<RawDocument> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    RawDocument doc;
    try {
      const auto j = nlohmann::json::parse(line);
      doc.id = j.at("id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      doc.source = j.contains("source") ? parse_source(j.at("source").get<std::string>())
                                        : default_source;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + e.what());
    } catch (const ArgumentError& e) {
      throw FormatError(where + e.what());
    }
    if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos)
      throw FormatError(where + "document '" + doc.id + "' has empty text");
    if (!ids.insert(doc.id).second)
      throw FormatError(where + "duplicate document id '" + doc.id + "'");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> read_raw_corpus(const std::filesystem::path& path,
                                         Source default_source) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return read_raw_corpus_stream(in, path.string(), default_source);
}

void write_raw_corpus(std::ostream& out, std::span<const RawDocument> docs) {
  for (const auto& d : docs) {
    ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["source"] = to_string(d.source);
    out << j.dump() << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace textlier::corpus
