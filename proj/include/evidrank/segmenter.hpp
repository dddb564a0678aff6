// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evidrank {

/// Tokens ending in '.' that never close a sentence.
struct SegmenterConfig {
  std::vector<std::string> abbreviations = default_abbreviations();

  static std::vector<std::string> default_abbreviations();
};

/// Splits after '.', '!' or '?' when followed by whitespace, unless the
/// whitespace-delimited token ending at the mark is a listed abbreviation.
/// Segments are trimmed and empty ones dropped.
std::vector<std::string> segment_document(std::string_view raw_text,
                                          const SegmenterConfig& config = SegmenterConfig{});

std::string_view trim(std::string_view s) noexcept;

}  // namespace evidrank
