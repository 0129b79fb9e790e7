#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace textlier::corpus {

/// Splits at runs of '.', '!' or '?' that are followed by whitespace or the
/// end of the text. Terminators are dropped, segments trimmed, empty segments
/// removed. Text without a terminator is a single sentence.
/// Throws ArgumentError for empty or whitespace-only text.
std::vector<std::string> split_sentences(std::string_view text);

using SentenceSplitter = std::function<std::vector<std::string>(std::string_view)>;

}  // namespace textlier::corpus
