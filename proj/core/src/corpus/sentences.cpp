#include "textlier/corpus/sentences.hpp"

#include <cctype>

#include "textlier/error.hpp"

namespace textlier::corpus {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  if (trim(text).empty()) throw ArgumentError("cannot split empty text into sentences");

  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && is_terminator(text[run_end])) ++run_end;
    if (run_end == text.size() || is_space(text[run_end])) {
      auto segment = trim(text.substr(start, i - start));
      if (!segment.empty()) out.emplace_back(segment);
      start = run_end;
    }
    i = run_end;
  }
  auto tail = trim(text.substr(start));
  if (!tail.empty()) out.emplace_back(tail);
  // only terminators, e.g. "?!"
  if (out.empty()) throw ArgumentError("text contains no sentence content");
  return out;
}

}  // namespace textlier::corpus
