// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "evidrank/segmenter.hpp"

namespace evidrank {

enum class VerdictLabel : int { Refuted = 0, Supported = 1, NEI = 2 };

/// "refuted" / "supported" / "nei".
std::string_view to_string(VerdictLabel label) noexcept;
/// Accepts the lowercase names above (case-insensitive) and the five Factify labels.
VerdictLabel parse_verdict_label(std::string_view raw);

/// Support_Text/Support_Multimodal -> Supported, Insufficient_* -> NEI, Refute -> Refuted.
VerdictLabel collapse_factify_labels(std::string_view raw);

enum class Modality { Text, Image };

std::string_view to_string(Modality modality) noexcept;
Modality parse_modality(std::string_view raw);

struct Claim {
  std::string claim_id;
  std::string text;
  std::optional<VerdictLabel> gold_label;
  std::set<std::string> gold_sentence_ids;
  std::set<std::string> gold_image_ids;
  nlohmann::json extra = nlohmann::json::object();

  const std::set<std::string>& gold_ids(Modality modality) const {
    return modality == Modality::Text ? gold_sentence_ids : gold_image_ids;
  }

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct Sentence {
  std::string sent_id;
  std::string doc_id;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct ImageRef {
  std::string image_id;
  std::string doc_id;
  std::string uri;
  std::optional<std::string> alt_text;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct EvidenceDoc {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::vector<ImageRef> images;
  nlohmann::json extra = nlohmann::json::object();

  friend bool operator==(const EvidenceDoc&, const EvidenceDoc&) = default;
};

struct RelevanceAnnotation {
  std::string claim_id;
  std::string candidate_id;
  Modality modality = Modality::Text;
  bool entity_level = false;
  bool evidence_level = false;
  bool overall = false;
};

/// Immutable evidence collection with global id indexes. Safe for concurrent reads.
class Corpus {
 public:
  Corpus() = default;

  /// Validates the id invariants and builds the indexes.
  explicit Corpus(std::vector<EvidenceDoc> docs);

  std::size_t document_count() const noexcept { return docs_.size(); }
  std::size_t sentence_count() const noexcept { return sentence_index_.size(); }
  std::size_t image_count() const noexcept { return image_index_.size(); }

  const std::vector<EvidenceDoc>& documents() const noexcept { return docs_; }

  const EvidenceDoc* find_document(std::string_view doc_id) const;
  const Sentence* find_sentence(std::string_view sent_id) const;
  const ImageRef* find_image(std::string_view image_id) const;

  /// Owning document of a sentence or image id; throws LookupError.
  const EvidenceDoc& document_of(std::string_view item_id) const;

  /// Sentence and image ids in load order.
  std::vector<std::string> sentence_ids() const;
  std::vector<std::string> image_ids() const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.docs_ == b.docs_; }

 private:
  struct Slot {
    std::size_t doc = 0;
    std::size_t item = 0;
  };

  std::vector<EvidenceDoc> docs_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::unordered_map<std::string, Slot> sentence_index_;
  std::unordered_map<std::string, Slot> image_index_;
};

Corpus load_corpus(const std::filesystem::path& path,
                   const SegmenterConfig& segmenter = SegmenterConfig{});
Corpus parse_corpus(std::string_view text, const std::string& source = "<memory>",
                    const SegmenterConfig& segmenter = SegmenterConfig{});
/// One document record per line, in load order. Sentences are always written pre-segmented.
std::string serialize_corpus(const Corpus& corpus);

std::vector<Claim> load_claims(const std::filesystem::path& path);
std::vector<Claim> parse_claims(std::string_view text, const std::string& source = "<memory>");
std::string serialize_claims(const std::vector<Claim>& claims);

std::vector<RelevanceAnnotation> load_annotations(const std::filesystem::path& path);
std::vector<RelevanceAnnotation> parse_annotations(std::string_view text,
                                                   const std::string& source = "<memory>");

}  // namespace evidrank
