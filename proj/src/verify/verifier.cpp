// SPDX-License-Identifier: Apache-2.0
#include <spdlog/spdlog.h>

#include "evidrank/parallel.hpp"
#include "evidrank/verifier.hpp"

namespace evidrank {

std::string_view to_string(PromptingMode m) noexcept {
  return m == PromptingMode::OneLevel ? "one-level" : "two-level";
}

PromptingMode parse_prompting_mode(std::string_view raw) {
  if (raw == "one-level" || raw == "one_level") return PromptingMode::OneLevel;
  if (raw == "two-level" || raw == "two_level") return PromptingMode::TwoLevel;
  throw ConfigError("unknown prompting mode \"" + std::string(raw) + "\"");
}

ClassDecision classify_three_way(const OracleResponse& resp) {
  const double yes = resp.mass(TokenClass::Yes);
  const double no = resp.mass(TokenClass::No);
  const double none = resp.mass(TokenClass::None_);
  const double total = yes + no + none;
  if (total <= 0.0) {
    throw DegenerateResponseError("one-level verification: Yes, No and None masses are all zero");
  }
  // Visit in tie priority order; a later class must be strictly larger to win.
  ClassDecision best{TokenClass::None_, none / total, {}};
  if (no / total > best.prob) best = {TokenClass::No, no / total, {}};
  if (yes / total > best.prob) best = {TokenClass::Yes, yes / total, {}};
  return best;
}

namespace {

VerdictLabel label_of(TokenClass c) {
  switch (c) {
    case TokenClass::Yes: return VerdictLabel::Supported;
    case TokenClass::No: return VerdictLabel::Refuted;
    default: return VerdictLabel::NEI;
  }
}

OracleResponse ask(const EvidencePair& pair, const Claim& claim, Oracle& oracle,
                   const PromptTemplate& tmpl, const VerifyContext& ctx, const char* task) {
  const auto prompt =
      build_verification_prompt(tmpl, claim, pair.evidence_text(),
                                pair.uses_text_prompt() ? std::vector<std::string>{} : pair.image_uris(),
                                ctx.char_budget);
  OracleRequest req;
  req.task = task;
  req.claim_id = claim.claim_id;
  req.candidate_id = pair.anchor_id();
  req.model = ctx.model;
  req.prompt = prompt.text;
  req.image_uris = prompt.image_uris;
  req.classes = tmpl.answer_classes;
  return oracle.query(req);
}

}  // namespace

Vote verify_one_level(const EvidencePair& pair, const Claim& claim, Oracle& oracle,
                      const PromptTemplate& tmpl, const VerifyContext& ctx) {
  const auto resp = ask(pair, claim, oracle, tmpl, ctx, "verify");
  const auto d = classify_three_way(resp);
  return {pair.pair_id(), label_of(d.cls), d.prob, std::nullopt};
}

Vote verify_two_level(const EvidencePair& pair, const Claim& claim, Oracle& oracle,
                      const PromptTemplate& sufficiency, const PromptTemplate& stance,
                      const VerifyContext& ctx) {
  const auto first = classify_gais_yn(ask(pair, claim, oracle, sufficiency, ctx, "sufficiency"));
  if (first.cls != TokenClass::Yes) {
    return {pair.pair_id(), VerdictLabel::NEI, first.prob, LevelTrace{first.cls, std::nullopt}};
  }
  const auto second = classify_gais_yn(ask(pair, claim, oracle, stance, ctx, "stance"));
  return {pair.pair_id(), label_of(second.cls), second.prob, LevelTrace{first.cls, second.cls}};
}

Verdict verify_claim(const Claim& claim, std::span<const EvidencePair> pairs, Oracle& oracle,
                     const VerifierConfig& config) {
  std::vector<std::optional<Vote>> votes(pairs.size());
  std::vector<std::string> errors(pairs.size());

  parallel_for(pairs.size(), config.max_in_flight, [&](std::size_t i) {
    const auto& pair = pairs[i];
    const bool text = pair.uses_text_prompt();
    const auto& templates = text ? config.text_templates : config.image_templates;
    const auto& ctx = text ? config.text_context : config.image_context;
    const auto mode = pair.modality == PairModality::TextOnly || text ? config.text_mode
                                                                      : config.multimodal_mode;
    try {
      votes[i] = mode == PromptingMode::OneLevel
                     ? verify_one_level(pair, claim, oracle, templates.one_level, ctx)
                     : verify_two_level(pair, claim, oracle, templates.sufficiency,
                                        templates.stance, ctx);
    } catch (const TransportError&) {
      throw;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::vector<Vote> cast;
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (votes[i]) {
      cast.push_back(std::move(*votes[i]));
    } else {
      failed.push_back(pairs[i].pair_id());
      spdlog::warn("stage=verify claim_id={} pair={} error=\"{}\"", claim.claim_id,
                   pairs[i].pair_id(), errors[i]);
    }
  }

  Verdict v;
  if (cast.empty()) {
    v.claim_id = claim.claim_id;
    v.label = VerdictLabel::NEI;
    v.decision_basis = DecisionBasis::NoEvidence;
  } else {
    v = majority_vote(cast, claim.claim_id, config.tie_priority);
  }
  v.failed_pairs = std::move(failed);
  return v;
}

}  // namespace evidrank
