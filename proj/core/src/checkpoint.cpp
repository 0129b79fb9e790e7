#include "textlier/checkpoint.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "textlier/corpus/io.hpp"
#include "textlier/error.hpp"

namespace textlier {

const nn::Tensor& Checkpoint::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.tensor;
  throw FormatError("checkpoint has no parameter block '" + name + "'");
}

bool Checkpoint::has_param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return true;
  return false;
}

const std::string& Checkpoint::value(const std::string& key) const {
  auto it = config.find(key);
  if (it == config.end()) throw FormatError("checkpoint has no config entry '" + key + "'");
  return it->second;
}

std::string format_real(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalError("cannot format real");
  return std::string(buf.data(), end);
}

double parse_real(const std::string& text) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw FormatError("'" + text + "' is not a real number");
  return value;
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << "textlier-checkpoint\n";
  out << "version " << kCheckpointVersion << '\n';
  for (const auto& [key, value] : ckpt.config) {
    if (key.find_first_of(" \t\n") != std::string::npos || value.find('\n') != std::string::npos)
      throw ArgumentError("checkpoint config entry '" + key + "' contains whitespace/newline");
    out << "config " << key << ' ' << value << '\n';
  }
  for (const auto& p : ckpt.params) {
    if (!p.tensor.all_finite())
      throw NumericalError("parameter block '" + p.name + "' contains non-finite values");
    out << "param " << p.name << ' ' << p.tensor.rank();
    for (std::size_t d : p.tensor.shape()) out << ' ' << d;
    out << '\n';
    const auto values = p.tensor.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << format_real(values[i]);
      out << ((i + 1) % 8 == 0 || i + 1 == values.size() ? '\n' : ' ');
    }
  }
  out << "end\n";
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      fields = std::istringstream(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& expectation) const {
    throw FormatError(source_ + ":" + std::to_string(line_no_) + ": expected " + expectation);
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

}  // namespace

Checkpoint read_checkpoint(std::istream& in, const std::string& source_name) {
  LineReader reader(in, source_name);
  std::istringstream fields;
  std::string word;

  if (!reader.next(fields) || !(fields >> word) || word != "textlier-checkpoint")
    reader.fail("'textlier-checkpoint' magic line");
  int version = 0;
  if (!reader.next(fields) || !(fields >> word >> version) || word != "version")
    reader.fail("'version <n>' line");
  if (version != kCheckpointVersion)
    reader.fail("checkpoint version " + std::to_string(kCheckpointVersion));

  Checkpoint ckpt;
  bool ended = false;
  while (reader.next(fields)) {
    if (!(fields >> word)) reader.fail("a config, param or end line");
    if (word == "end") {
      ended = true;
      break;
    }
    if (word == "config") {
      std::string key, value;
      if (!(fields >> key)) reader.fail("config key");
      std::getline(fields >> std::ws, value);
      if (!ckpt.config.emplace(key, value).second) reader.fail("unique config key '" + key + "'");
      continue;
    }
    if (word != "param") reader.fail("a config, param or end line, got '" + word + "'");

    nn::NamedTensor block;
    std::size_t rank = 0;
    if (!(fields >> block.name >> rank) || rank == 0) reader.fail("'param <name> <rank> <dims>'");
    nn::Tensor::Shape shape(rank);
    for (auto& d : shape)
      if (!(fields >> d) || d == 0) reader.fail("positive dimension for '" + block.name + "'");
    const std::size_t count = nn::element_count(shape);
    std::vector<double> values;
    values.reserve(count);
    while (values.size() < count) {
      if (!reader.next(fields))
        reader.fail(std::to_string(count) + " values for '" + block.name + "'");
      std::string token;
      while (fields >> token) {
        if (values.size() == count) reader.fail("no more values for '" + block.name + "'");
        try {
          values.push_back(parse_real(token));
        } catch (const FormatError&) {
          reader.fail("a real value in '" + block.name + "', got '" + token + "'");
        }
        if (!std::isfinite(values.back())) reader.fail("finite values in '" + block.name + "'");
      }
    }
    for (const auto& p : ckpt.params)
      if (p.name == block.name) reader.fail("unique parameter name '" + block.name + "'");
    block.tensor = nn::Tensor(std::move(shape), std::move(values));
    ckpt.params.push_back(std::move(block));
  }
  if (!ended) reader.fail("'end' line");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ostringstream out;
  write_checkpoint(out, ckpt);
  corpus::write_file_atomic(path, out.str());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace textlier
