// SPDX-License-Identifier: Apache-2.0
#include "evidrank/prompt.hpp"

#include <algorithm>

#include "evidrank/error.hpp"

namespace evidrank {

std::string_view to_string(PromptLayout layout) noexcept {
  switch (layout) {
    case PromptLayout::TextPair: return "text_pair";
    case PromptLayout::ImageQuery: return "image_query";
    case PromptLayout::ImagePair: return "image_pair";
  }
  return "text_pair";
}

PromptLayout parse_prompt_layout(std::string_view raw) {
  if (raw == "text_pair") return PromptLayout::TextPair;
  if (raw == "image_query") return PromptLayout::ImageQuery;
  if (raw == "image_pair") return PromptLayout::ImagePair;
  throw ConfigError("unknown prompt layout \"" + std::string(raw) + "\"");
}

void PromptTemplate::validate() const {
  if (instruction.empty()) throw ConfigError("template \"" + name + "\" has an empty instruction");
  if (answer_classes.empty()) throw ConfigError("template \"" + name + "\" lists no answer classes");
}

std::string_view truncate_utf8(std::string_view s, std::size_t max_bytes) noexcept {
  if (s.size() <= max_bytes) return s;
  std::size_t cut = max_bytes;
  // Step back over continuation bytes (10xxxxxx) to a sequence boundary.
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut);
}

namespace {

struct Slots {
  std::string_view claim;
  std::string_view evidence;
};

// Fits claim and evidence into what the budget leaves after `fixed` bytes.
Slots fit(std::string_view claim, std::string_view evidence, std::size_t fixed,
          std::size_t budget) {
  const std::size_t avail = budget > fixed ? budget - fixed : 0;
  const std::size_t claim_cap =
      evidence.empty() ? avail : std::max(avail / 2, avail - std::min(avail, evidence.size()));
  Slots s;
  s.claim = truncate_utf8(claim, claim_cap);
  s.evidence = truncate_utf8(evidence, avail - s.claim.size());
  return s;
}

std::string render_pair(const PromptTemplate& t, std::string_view claim, std::string_view evidence,
                        bool with_evidence) {
  std::string out = t.instruction;
  out += "\n### ";
  out += t.query_label;
  out += ": ";
  out += claim;
  if (with_evidence) {
    out += "\n### ";
    out += t.evidence_label;
    out += ": ";
    out += evidence;
  }
  out += "\n### Answer:";
  return out;
}

}  // namespace

RenderedPrompt build_relevance_prompt(const PromptTemplate& tmpl, const Claim& claim,
                                      const RelevanceCandidate& candidate,
                                      std::size_t char_budget) {
  RenderedPrompt out;
  if (tmpl.layout == PromptLayout::TextPair) {
    const auto* sent = std::get_if<Sentence>(&candidate);
    if (sent == nullptr) {
      throw ModalityError("template \"" + tmpl.name + "\" expects a sentence candidate");
    }
    const auto fixed = render_pair(tmpl, "", "", true).size();
    auto slots = fit(claim.text, sent->text, fixed, char_budget);
    out.text = render_pair(tmpl, slots.claim, slots.evidence, true);
    return out;
  }
  if (tmpl.layout == PromptLayout::ImageQuery) {
    const auto* img = std::get_if<ImageRef>(&candidate);
    if (img == nullptr) {
      throw ModalityError("template \"" + tmpl.name + "\" expects an image candidate");
    }
    std::string head = tmpl.instruction + "\n### " + tmpl.query_label + ": ";
    out.text = head + std::string(truncate_utf8(
                          claim.text, char_budget > head.size() ? char_budget - head.size() : 0));
    out.image_uris.push_back(img->uri);
    return out;
  }
  throw ModalityError("template \"" + tmpl.name + "\" is not a relevance template");
}

RenderedPrompt build_verification_prompt(const PromptTemplate& tmpl, const Claim& claim,
                                         std::string_view evidence_text,
                                         const std::vector<std::string>& image_uris,
                                         std::size_t char_budget) {
  RenderedPrompt out;
  const bool with_evidence = !evidence_text.empty() || tmpl.layout == PromptLayout::TextPair;
  switch (tmpl.layout) {
    case PromptLayout::TextPair:
      if (!image_uris.empty()) {
        throw ModalityError("template \"" + tmpl.name + "\" cannot carry images");
      }
      break;
    case PromptLayout::ImagePair:
      out.image_uris = image_uris;
      break;
    case PromptLayout::ImageQuery:
      throw ModalityError("template \"" + tmpl.name + "\" is not a verification template");
  }
  const auto fixed = render_pair(tmpl, "", "", with_evidence).size();
  auto slots = fit(claim.text, evidence_text, fixed, char_budget);
  out.text = render_pair(tmpl, slots.claim, slots.evidence, with_evidence);
  return out;
}

std::map<std::string, PromptTemplate> builtin_templates() {
  using namespace template_names;
  const std::vector<TokenClass> yn{TokenClass::Yes, TokenClass::No};
  const std::vector<TokenClass> yn_none{TokenClass::Yes, TokenClass::No, TokenClass::None_};

  std::map<std::string, PromptTemplate> t;
  auto text = [&](const char* name, const char* instruction) {
    t[name] = {name, instruction, PromptLayout::TextPair, yn, "Query", "corpus"};
  };
  auto image = [&](const char* name, const char* instruction) {
    t[name] = {name, instruction, PromptLayout::ImageQuery, yn, "Query", ""};
  };
  text(kTextRelated, "Is this corpus related to the query? Answer with yes or no.");
  text(kTextSameTopic, "Is query and corpus mentioning the same person or topic? Answer with yes or no.");
  text(kTextEvidence, "Is this corpus an evidence for the query? Answer with yes or no.");
  image(kImageDescribe, "Does this query describe the image?");
  image(kImageRelated, "Based on the query below, is it related to the image?");
  image(kImageSameTopic, "Is this image and text query mentioning the same person or topic?");

  const char* one_level =
      "Does the evidence support the claim? Answer 'Yes' if the evidence supports the claim, "
      "'No' if it refutes the claim, or 'None' if it does not provide enough information.";
  const char* sufficiency =
      "Is the evidence enough to support or refute the claim? Answer with yes or no.";
  const char* stance =
      "Does the evidence support the claim? Answer 'Yes' if it supports the claim and 'No' if "
      "it refutes the claim.";
  t[kVerifyOneLevel] = {kVerifyOneLevel, one_level, PromptLayout::TextPair, yn_none, "Claim", "Evidence"};
  t[kVerifySufficiency] = {kVerifySufficiency, sufficiency, PromptLayout::TextPair, yn, "Claim", "Evidence"};
  t[kVerifyStance] = {kVerifyStance, stance, PromptLayout::TextPair, yn, "Claim", "Evidence"};
  t[kVerifyOneLevelImage] = {kVerifyOneLevelImage, one_level, PromptLayout::ImagePair, yn_none, "Claim", "Evidence"};
  t[kVerifySufficiencyImage] = {kVerifySufficiencyImage, sufficiency, PromptLayout::ImagePair, yn, "Claim", "Evidence"};
  t[kVerifyStanceImage] = {kVerifyStanceImage, stance, PromptLayout::ImagePair, yn, "Claim", "Evidence"};
  return t;
}

}  // namespace evidrank
