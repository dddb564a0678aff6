// SPDX-License-Identifier: Apache-2.0
#include "evidrank/segmenter.hpp"

#include <algorithm>
#include <cctype>

namespace evidrank {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Whitespace-delimited token ending at `last` (inclusive), minus leading
// opening punctuation such as quotes or brackets.
std::string_view token_ending_at(std::string_view text, std::size_t last) {
  std::size_t begin = last;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < last && std::string_view("\"'([{").find(text[begin]) != std::string_view::npos) {
    ++begin;
  }
  return text.substr(begin, last - begin + 1);
}

}  // namespace

std::vector<std::string> SegmenterConfig::default_abbreviations() {
  return {"U.S.", "U.K.", "U.N.", "E.U.", "Mr.",  "Mrs.", "Ms.",  "Dr.",   "Prof.",
          "Sr.",  "Jr.",  "St.",  "Gen.", "Gov.", "Sen.", "Rep.", "Lt.",   "Col.",
          "Inc.", "Ltd.", "Co.",  "Corp.", "vs.", "etc.", "e.g.", "i.e.",  "No.",
          "Jan.", "Feb.", "Mar.", "Apr.", "Aug.", "Sept.", "Sep.", "Oct.", "Nov.", "Dec."};
}

std::string_view trim(std::string_view s) noexcept {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> segment_document(std::string_view raw_text,
                                          const SegmenterConfig& config) {
  std::vector<std::string> out;
  auto flush = [&](std::size_t begin, std::size_t end) {
    auto seg = trim(raw_text.substr(begin, end - begin));
    if (!seg.empty()) out.emplace_back(seg);
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < raw_text.size(); ++i) {
    if (!is_terminal(raw_text[i]) || !is_space(raw_text[i + 1])) continue;
    if (raw_text[i] == '.') {
      auto token = token_ending_at(raw_text, i);
      const auto& abbrev = config.abbreviations;
      if (std::find(abbrev.begin(), abbrev.end(), token) != abbrev.end()) continue;
    }
    flush(start, i + 1);
    start = i + 1;
  }
  flush(start, raw_text.size());
  return out;
}

}  // namespace evidrank
