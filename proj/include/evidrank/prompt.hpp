// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evidrank/corpus.hpp"
#include "evidrank/oracle.hpp"

namespace evidrank {

enum class PromptLayout {
  TextPair,    // instruction / ### Query: / ### corpus: / ### Answer:
  ImageQuery,  // instruction / ### Query:  + image attachment
  ImagePair,   // instruction / ### Claim: / ### Evidence: / ### Answer: + image attachments
};

std::string_view to_string(PromptLayout layout) noexcept;
PromptLayout parse_prompt_layout(std::string_view raw);

struct PromptTemplate {
  std::string name;
  std::string instruction;
  PromptLayout layout = PromptLayout::TextPair;
  std::vector<TokenClass> answer_classes{TokenClass::Yes, TokenClass::No};
  std::string query_label = "Query";
  std::string evidence_label = "corpus";

  /// Throws ConfigError on an empty instruction or empty answer classes.
  void validate() const;
};

struct RenderedPrompt {
  std::string text;
  std::vector<std::string> image_uris;  // sent out of band
};

/// Character budgets derived from model token limits at ~4 chars per token.
inline constexpr std::size_t kCharsPerToken = 4;
inline constexpr std::size_t chars_for_tokens(std::size_t tokens) { return tokens * kCharsPerToken; }

/// Truncates to at most `max_bytes` without splitting a UTF-8 sequence.
std::string_view truncate_utf8(std::string_view s, std::size_t max_bytes) noexcept;

using RelevanceCandidate = std::variant<Sentence, ImageRef>;

/// TextPair templates take a Sentence, ImageQuery templates an ImageRef;
/// anything else raises ModalityError. Claim and evidence text share the
/// budget left after the fixed scaffolding, the claim capped at half of it.
RenderedPrompt build_relevance_prompt(const PromptTemplate& tmpl, const Claim& claim,
                                      const RelevanceCandidate& candidate,
                                      std::size_t char_budget);

/// Claim/evidence prompt for verification. TextPair renders text only;
/// ImagePair attaches `image_uris`.
RenderedPrompt build_verification_prompt(const PromptTemplate& tmpl, const Claim& claim,
                                         std::string_view evidence_text,
                                         const std::vector<std::string>& image_uris,
                                         std::size_t char_budget);

/// Built-in templates keyed by name: the three text and three image relevance
/// prompts, plus editable defaults for one-level and two-level verification.
std::map<std::string, PromptTemplate> builtin_templates();

namespace template_names {
inline constexpr const char* kTextRelated = "text-related";
inline constexpr const char* kTextSameTopic = "text-same-topic";
inline constexpr const char* kTextEvidence = "text-evidence";
inline constexpr const char* kImageDescribe = "image-describe";
inline constexpr const char* kImageRelated = "image-related";
inline constexpr const char* kImageSameTopic = "image-same-topic";
inline constexpr const char* kVerifyOneLevel = "verify-one-level";
inline constexpr const char* kVerifySufficiency = "verify-sufficiency";
inline constexpr const char* kVerifyStance = "verify-stance";
inline constexpr const char* kVerifyOneLevelImage = "verify-one-level-image";
inline constexpr const char* kVerifySufficiencyImage = "verify-sufficiency-image";
inline constexpr const char* kVerifyStanceImage = "verify-stance-image";
}  // namespace template_names

}  // namespace evidrank
