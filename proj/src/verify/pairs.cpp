// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "evidrank/error.hpp"
#include "evidrank/verifier.hpp"

namespace evidrank {

std::string_view to_string(PairModality m) noexcept {
  return m == PairModality::TextOnly ? "text" : "multimodal";
}

PairModality parse_pair_modality(std::string_view raw) {
  if (raw == "text") return PairModality::TextOnly;
  if (raw == "multimodal") return PairModality::Multimodal;
  throw ConfigError("unknown verification modality \"" + std::string(raw) + "\"");
}

std::string EvidencePair::pair_id() const {
  return (is_image_anchor() ? "i:" : "s:") + anchor_id();
}

const std::string& EvidencePair::anchor_id() const {
  if (const auto* s = std::get_if<Sentence>(&anchor)) return s->sent_id;
  return std::get<ImageRef>(anchor).image_id;
}

std::string EvidencePair::evidence_text() const {
  if (const auto* s = std::get_if<Sentence>(&anchor)) return s->text;
  std::string out;
  for (const auto& s : companion_sentences) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

std::vector<std::string> EvidencePair::image_uris() const {
  if (const auto* i = std::get_if<ImageRef>(&anchor)) return {i->uri};
  std::vector<std::string> out;
  for (const auto& i : companion_images) out.push_back(i.uri);
  return out;
}

namespace {

template <typename Item, typename IdOf>
std::vector<Item> best_companions(const std::vector<Item>& items, std::size_t cap, Modality modality,
                                  const CompanionScorer& scorer, IdOf id_of) {
  struct Scored {
    double score;
    const Item* item;
  };
  std::vector<Scored> scored;
  scored.reserve(items.size());
  for (const auto& it : items) scored.push_back({scorer ? scorer(id_of(it), modality) : 0.0, &it});
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return id_of(*a.item) < id_of(*b.item);
  });
  std::vector<Item> out;
  for (std::size_t i = 0; i < scored.size() && i < cap; ++i) out.push_back(*scored[i].item);
  return out;
}

}  // namespace

std::vector<EvidencePair> form_pairs(const Claim& claim,
                                     std::span<const RerankedCandidate> text_evidence,
                                     std::span<const RerankedCandidate> image_evidence,
                                     const Corpus& corpus, PairModality modality,
                                     const PairingConfig& config, const CompanionScorer& scorer) {
  std::vector<EvidencePair> pairs;
  for (const auto& r : text_evidence) {
    const auto* sent = corpus.find_sentence(r.candidate.candidate_id);
    if (sent == nullptr) {
      throw IntegrityError("retrieved sentence \"" + r.candidate.candidate_id +
                           "\" is not in the corpus");
    }
    EvidencePair p;
    p.claim_id = claim.claim_id;
    p.anchor = *sent;
    p.modality = modality;
    if (modality == PairModality::Multimodal) {
      const auto* doc = corpus.find_document(sent->doc_id);
      if (doc == nullptr) throw IntegrityError("document \"" + sent->doc_id + "\" is missing");
      p.companion_images = best_companions(doc->images, config.max_images_per_sentence,
                                           Modality::Image, scorer,
                                           [](const ImageRef& i) -> const std::string& { return i.image_id; });
    }
    pairs.push_back(std::move(p));
  }
  if (modality == PairModality::TextOnly) return pairs;

  for (const auto& r : image_evidence) {
    const auto* img = corpus.find_image(r.candidate.candidate_id);
    if (img == nullptr) {
      throw IntegrityError("retrieved image \"" + r.candidate.candidate_id +
                           "\" is not in the corpus");
    }
    const auto* doc = corpus.find_document(img->doc_id);
    if (doc == nullptr) throw IntegrityError("document \"" + img->doc_id + "\" is missing");
    EvidencePair p;
    p.claim_id = claim.claim_id;
    p.anchor = *img;
    p.modality = modality;
    p.companion_sentences = best_companions(doc->sentences, config.max_sentences_per_image,
                                            Modality::Text, scorer,
                                            [](const Sentence& s) -> const std::string& { return s.sent_id; });
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace evidrank
