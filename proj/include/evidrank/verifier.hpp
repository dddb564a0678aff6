// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evidrank/corpus.hpp"
#include "evidrank/oracle.hpp"
#include "evidrank/prompt.hpp"
#include "evidrank/reranker.hpp"

namespace evidrank {

enum class PairModality { TextOnly, Multimodal };

std::string_view to_string(PairModality m) noexcept;
PairModality parse_pair_modality(std::string_view raw);

/// A retrieved item (the anchor) plus same-document companions of the other modality.
struct EvidencePair {
  std::string claim_id;
  std::variant<Sentence, ImageRef> anchor;
  std::vector<ImageRef> companion_images;   // sentence anchors
  std::vector<Sentence> companion_sentences;  // image anchors
  PairModality modality = PairModality::TextOnly;

  /// "s:<sent_id>" or "i:<image_id>".
  std::string pair_id() const;
  /// Id of the anchor sentence or image.
  const std::string& anchor_id() const;
  bool is_image_anchor() const noexcept { return std::holds_alternative<ImageRef>(anchor); }
  /// Sentence anchors without images are asked with the text prompt.
  bool uses_text_prompt() const noexcept {
    return !is_image_anchor() && companion_images.empty();
  }
  /// Text shown as evidence: the anchor sentence, or the companion sentences of an image.
  std::string evidence_text() const;
  std::vector<std::string> image_uris() const;
};

struct PairingConfig {
  std::size_t max_images_per_sentence = 3;
  std::size_t max_sentences_per_image = 3;
};

/// Initial retrieval score of a companion item for the claim; larger ranks first.
using CompanionScorer = std::function<double(const std::string& item_id, Modality modality)>;

/// TextOnly: one pair per retrieved sentence. Multimodal: additionally attaches
/// up to max_images_per_sentence same-document images to each sentence and
/// forms one pair per retrieved image with its best max_sentences_per_image
/// same-document sentences (by scorer, then id). Throws IntegrityError when an
/// anchor is not in the corpus.
std::vector<EvidencePair> form_pairs(const Claim& claim,
                                     std::span<const RerankedCandidate> text_evidence,
                                     std::span<const RerankedCandidate> image_evidence,
                                     const Corpus& corpus, PairModality modality,
                                     const PairingConfig& config, const CompanionScorer& scorer);

struct LevelTrace {
  TokenClass level1 = TokenClass::No;
  std::optional<TokenClass> level2;
};

struct Vote {
  std::string pair_id;
  VerdictLabel label = VerdictLabel::NEI;
  double confidence = 0.0;
  std::optional<LevelTrace> level_trace;
};

enum class DecisionBasis { Majority, ProbabilityTieBreak, PriorityTieBreak, NoEvidence };

std::string_view to_string(DecisionBasis b) noexcept;

struct Verdict {
  std::string claim_id;
  VerdictLabel label = VerdictLabel::NEI;
  std::vector<Vote> votes;
  DecisionBasis decision_basis = DecisionBasis::Majority;
  /// Pairs whose oracle answer was unusable; they cast no vote.
  std::vector<std::string> failed_pairs;
};

/// Three-class decision over Yes/No/None masses renormalized among
/// themselves; exact ties resolve None > No > Yes. Throws
/// DegenerateResponseError when all three masses are zero.
ClassDecision classify_three_way(const OracleResponse& resp);

/// What a verifier needs to issue a request besides the pair.
struct VerifyContext {
  std::string model;
  std::size_t char_budget = chars_for_tokens(2048);
};

/// One oracle call: Yes -> Supported, No -> Refuted, None -> NEI.
Vote verify_one_level(const EvidencePair& pair, const Claim& claim, Oracle& oracle,
                      const PromptTemplate& tmpl, const VerifyContext& ctx);

/// Sufficiency question first (No -> NEI, no second call), then the stance
/// question (Yes -> Supported, No -> Refuted). Both levels use GAIS-YN.
Vote verify_two_level(const EvidencePair& pair, const Claim& claim, Oracle& oracle,
                      const PromptTemplate& sufficiency, const PromptTemplate& stance,
                      const VerifyContext& ctx);

/// Labels in tie priority order, strongest first.
using TiePriority = std::array<VerdictLabel, 3>;
inline constexpr TiePriority kDefaultTiePriority{VerdictLabel::NEI, VerdictLabel::Refuted,
                                                 VerdictLabel::Supported};

/// Most votes wins; a count tie goes to the tied label holding the single
/// most confident vote; a further tie resolves by `priority`.
/// Throws ContractError on an empty list.
Verdict majority_vote(std::span<const Vote> votes, std::string claim_id = {},
                      const TiePriority& priority = kDefaultTiePriority);

enum class PromptingMode { OneLevel, TwoLevel };

std::string_view to_string(PromptingMode m) noexcept;
PromptingMode parse_prompting_mode(std::string_view raw);

struct TemplateSet {
  PromptTemplate one_level;
  PromptTemplate sufficiency;
  PromptTemplate stance;
};

struct VerifierConfig {
  PromptingMode text_mode = PromptingMode::OneLevel;
  PromptingMode multimodal_mode = PromptingMode::TwoLevel;
  TemplateSet text_templates;
  TemplateSet image_templates;
  VerifyContext text_context;
  VerifyContext image_context{"", chars_for_tokens(2048)};
  TiePriority tie_priority = kDefaultTiePriority;
  std::size_t max_in_flight = 8;
};

/// Verifies every pair (in parallel, bounded by max_in_flight) and pools the
/// votes into one election. Transport failures propagate; other oracle
/// failures are recorded in failed_pairs. No usable vote yields NEI with
/// basis NoEvidence.
Verdict verify_claim(const Claim& claim, std::span<const EvidencePair> pairs, Oracle& oracle,
                     const VerifierConfig& config);

}  // namespace evidrank
