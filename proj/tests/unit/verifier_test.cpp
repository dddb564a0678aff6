// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "evidrank/error.hpp"
#include "evidrank/mock_oracle.hpp"
#include "evidrank/verifier.hpp"

using namespace evidrank;

namespace {

using L = VerdictLabel;

const Corpus& toy_corpus() {
  static const Corpus c = parse_corpus(
      R"({"doc_id":"d1","sentences":[{"sent_id":"s1","text":"One."},{"sent_id":"s2","text":"Two."}],"images":[{"image_id":"i1","uri":"u1"},{"image_id":"i2","uri":"u2"}]})"
      "\n"
      R"({"doc_id":"d2","sentences":[{"sent_id":"s9","text":"Nine."},{"sent_id":"s10","text":"Ten."},{"sent_id":"s11","text":"Eleven."},{"sent_id":"s12","text":"Twelve."}],"images":[{"image_id":"i3","uri":"u3"}]})"
      "\n"
      R"({"doc_id":"d3","sentences":[{"sent_id":"s20","text":"Plain."}]})");
  return c;
}

RerankedCandidate picked(std::string id, Modality m) {
  RerankedCandidate r;
  r.candidate = {std::move(id), m, 0.5, 1};
  return r;
}

Claim claim() {
  Claim c;
  c.claim_id = "c1";
  c.text = "Claim.";
  return c;
}

EvidencePair text_pair(std::string id) {
  EvidencePair p;
  p.claim_id = "c1";
  p.anchor = Sentence{std::move(id), "d1", "One."};
  return p;
}

OracleResponse resp(TokenClass g, double yes, double no, double none = 0.0) {
  const double p = g == TokenClass::Yes ? yes : g == TokenClass::No ? no : none;
  return OracleResponse::from_masses(g, yes, no, none, p);
}

VerifyContext ctx() { return {"m", 8192}; }

Vote v(L label, double conf) { return {"p", label, conf, std::nullopt}; }

}  // namespace

TEST(Pairs, TextOnlyOnePairPerSentence) {
  const std::vector<RerankedCandidate> text{picked("s1", Modality::Text), picked("s2", Modality::Text)};
  const auto pairs = form_pairs(claim(), text, {}, toy_corpus(), PairModality::TextOnly, {}, nullptr);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].pair_id(), "s:s1");
  EXPECT_EQ(pairs[1].pair_id(), "s:s2");
  EXPECT_TRUE(pairs[0].companion_images.empty());
}

TEST(Pairs, MultimodalAttachesSameDocumentCompanions) {
  const std::vector<RerankedCandidate> text{picked("s1", Modality::Text)};
  const std::vector<RerankedCandidate> images{picked("i3", Modality::Image)};
  PairingConfig cfg;
  cfg.max_sentences_per_image = 2;
  auto scorer = [](const std::string& id, Modality) {
    if (id == "s11") return 0.9;
    if (id == "s9") return 0.7;
    return 0.1;
  };
  const auto pairs = form_pairs(claim(), text, images, toy_corpus(), PairModality::Multimodal, cfg, scorer);
  ASSERT_EQ(pairs.size(), 2u);
  ASSERT_EQ(pairs[0].companion_images.size(), 2u);
  EXPECT_EQ(pairs[0].companion_images[0].image_id, "i1");
  EXPECT_EQ(pairs[0].companion_images[1].image_id, "i2");
  EXPECT_EQ(pairs[1].pair_id(), "i:i3");
  ASSERT_EQ(pairs[1].companion_sentences.size(), 2u);
  EXPECT_EQ(pairs[1].companion_sentences[0].sent_id, "s11");
  EXPECT_EQ(pairs[1].companion_sentences[1].sent_id, "s9");
  EXPECT_EQ(pairs[1].evidence_text(), "Eleven. Nine.");
  EXPECT_EQ(pairs[1].image_uris(), std::vector<std::string>{"u3"});
}

TEST(Pairs, ImagelessDocumentFallsBackToTextPrompt) {
  const std::vector<RerankedCandidate> text{picked("s20", Modality::Text)};
  const auto pairs = form_pairs(claim(), text, {}, toy_corpus(), PairModality::Multimodal, {}, nullptr);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].modality, PairModality::Multimodal);
  EXPECT_TRUE(pairs[0].uses_text_prompt());
}

TEST(Pairs, UnknownAnchorIsIntegrityError) {
  const std::vector<RerankedCandidate> text{picked("s404", Modality::Text)};
  EXPECT_THROW(form_pairs(claim(), text, {}, toy_corpus(), PairModality::TextOnly, {}, nullptr),
               IntegrityError);
}

TEST(ThreeWay, Examples) {
  auto d = classify_three_way(resp(TokenClass::Yes, 0.6, 0.2, 0.1));
  EXPECT_EQ(d.cls, TokenClass::Yes);
  EXPECT_NEAR(d.prob, 0.6 / 0.9, 1e-15);
  EXPECT_NEAR(d.prob, 0.667, 5e-4);

  d = classify_three_way(resp(TokenClass::None_, 0.0, 0.0, 1.0));
  EXPECT_EQ(d.cls, TokenClass::None_);
  EXPECT_EQ(d.prob, 1.0);

  d = classify_three_way(resp(TokenClass::Yes, 0.3, 0.3, 0.3));
  EXPECT_EQ(d.cls, TokenClass::None_);

  d = classify_three_way(resp(TokenClass::Yes, 0.4, 0.4, 0.1));
  EXPECT_EQ(d.cls, TokenClass::No);

  EXPECT_THROW(classify_three_way(OracleResponse::from_masses(TokenClass::Other, 0, 0, 0, 1.0)),
               DegenerateResponseError);
}

TEST(OneLevel, MapsClassesToLabels) {
  std::map<MockKey, OracleResponse> script;
  script[{"verify", "c1", "s1"}] = resp(TokenClass::Yes, 0.6, 0.2, 0.1);
  script[{"verify", "c1", "s2"}] = resp(TokenClass::No, 0.1, 0.7, 0.1);
  script[{"verify", "c1", "s3"}] = resp(TokenClass::None_, 0.0, 0.0, 1.0);
  MockOracle oracle(script, MockDefault::Error);
  const auto tmpl = builtin_templates().at(template_names::kVerifyOneLevel);

  auto vote = verify_one_level(text_pair("s1"), claim(), oracle, tmpl, ctx());
  EXPECT_EQ(vote.label, L::Supported);
  EXPECT_NEAR(vote.confidence, 0.6 / 0.9, 1e-15);
  EXPECT_EQ(verify_one_level(text_pair("s2"), claim(), oracle, tmpl, ctx()).label, L::Refuted);
  vote = verify_one_level(text_pair("s3"), claim(), oracle, tmpl, ctx());
  EXPECT_EQ(vote.label, L::NEI);
  EXPECT_EQ(vote.confidence, 1.0);
  EXPECT_FALSE(vote.level_trace.has_value());
}

TEST(TwoLevel, Examples) {
  std::map<MockKey, OracleResponse> script;
  script[{"sufficiency", "c1", "s1"}] = resp(TokenClass::No, 0.2, 0.8);
  script[{"sufficiency", "c1", "s2"}] = resp(TokenClass::Yes, 0.9, 0.1);
  script[{"stance", "c1", "s2"}] = resp(TokenClass::Yes, 0.7, 0.3);
  script[{"sufficiency", "c1", "s3"}] = resp(TokenClass::Yes, 0.9, 0.1);
  script[{"stance", "c1", "s3"}] = resp(TokenClass::No, 0.4, 0.6);
  const auto t = builtin_templates();
  const auto& suff = t.at(template_names::kVerifySufficiency);
  const auto& stance = t.at(template_names::kVerifyStance);

  MockOracle o1(script, MockDefault::Error);
  auto vote = verify_two_level(text_pair("s1"), claim(), o1, suff, stance, ctx());
  EXPECT_EQ(vote.label, L::NEI);
  EXPECT_NEAR(vote.confidence, 0.8, 1e-15);
  EXPECT_EQ(o1.calls(), 1u);
  ASSERT_TRUE(vote.level_trace);
  EXPECT_EQ(vote.level_trace->level1, TokenClass::No);
  EXPECT_FALSE(vote.level_trace->level2);

  MockOracle o2(script, MockDefault::Error);
  vote = verify_two_level(text_pair("s2"), claim(), o2, suff, stance, ctx());
  EXPECT_EQ(vote.label, L::Supported);
  EXPECT_NEAR(vote.confidence, 0.7, 1e-15);
  EXPECT_EQ(o2.calls(), 2u);
  EXPECT_EQ(vote.level_trace->level1, TokenClass::Yes);
  EXPECT_EQ(vote.level_trace->level2, TokenClass::Yes);

  MockOracle o3(script, MockDefault::Error);
  vote = verify_two_level(text_pair("s3"), claim(), o3, suff, stance, ctx());
  EXPECT_EQ(vote.label, L::Refuted);
  EXPECT_NEAR(vote.confidence, 0.6, 1e-15);
}

TEST(Majority, Examples) {
  auto r = majority_vote(std::vector<Vote>{v(L::Supported, .9), v(L::Supported, .6), v(L::Refuted, .8)});
  EXPECT_EQ(r.label, L::Supported);
  EXPECT_EQ(r.decision_basis, DecisionBasis::Majority);

  r = majority_vote(std::vector<Vote>{v(L::Supported, .7), v(L::Refuted, .9)});
  EXPECT_EQ(r.label, L::Refuted);
  EXPECT_EQ(r.decision_basis, DecisionBasis::ProbabilityTieBreak);

  r = majority_vote(std::vector<Vote>{v(L::Supported, .7), v(L::Refuted, .7)});
  EXPECT_EQ(r.label, L::Refuted);
  EXPECT_EQ(r.decision_basis, DecisionBasis::PriorityTieBreak);

  r = majority_vote(std::vector<Vote>{v(L::NEI, .7), v(L::Refuted, .7)});
  EXPECT_EQ(r.label, L::NEI);

  EXPECT_THROW(majority_vote(std::vector<Vote>{}), ContractError);
}

TEST(Majority, CustomPriority) {
  const TiePriority p{L::Supported, L::Refuted, L::NEI};
  const auto r = majority_vote(std::vector<Vote>{v(L::Supported, .7), v(L::Refuted, .7)}, "c", p);
  EXPECT_EQ(r.label, L::Supported);
}

TEST(Majority, DuplicatingTheWinnerKeepsTheVerdict) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Vote> votes;
    const auto n = 1 + rng() % 7;
    for (std::size_t k = 0; k < n; ++k) {
      votes.push_back(v(static_cast<L>(rng() % 3), static_cast<double>(rng() % 5) / 4.0));
    }
    const auto before = majority_vote(votes);
    auto extended = votes;
    for (const auto& x : votes) {
      if (x.label == before.label) {
        extended.push_back(x);
        break;
      }
    }
    EXPECT_EQ(majority_vote(extended).label, before.label);
  }
}

TEST(VerifyClaim, PoolsVotesAndRecordsFailures) {
  std::map<MockKey, OracleResponse> script;
  script[{"verify", "c1", "s1"}] = resp(TokenClass::Yes, 0.8, 0.1, 0.1);
  script[{"verify", "c1", "s2"}] = resp(TokenClass::Yes, 0.7, 0.2, 0.1);
  script[{"sufficiency", "c1", "i3"}] = resp(TokenClass::Yes, 0.9, 0.1);
  script[{"stance", "c1", "i3"}] = resp(TokenClass::No, 0.1, 0.9);
  MockOracle oracle(script, MockDefault::Error);

  const std::vector<RerankedCandidate> text{picked("s1", Modality::Text), picked("s2", Modality::Text),
                                            picked("s20", Modality::Text)};
  const std::vector<RerankedCandidate> images{picked("i3", Modality::Image)};
  const auto pairs =
      form_pairs(claim(), text, images, toy_corpus(), PairModality::Multimodal, {}, nullptr);

  const auto t = builtin_templates();
  VerifierConfig cfg;
  cfg.text_templates = {t.at(template_names::kVerifyOneLevel), t.at(template_names::kVerifySufficiency),
                        t.at(template_names::kVerifyStance)};
  cfg.image_templates = {t.at(template_names::kVerifyOneLevelImage),
                         t.at(template_names::kVerifySufficiencyImage),
                         t.at(template_names::kVerifyStanceImage)};
  cfg.text_context = ctx();
  cfg.image_context = ctx();
  cfg.max_in_flight = 3;

  // s1 and s2 have images so they take the two-level path and have no script entry.
  auto verdict = verify_claim(claim(), pairs, oracle, cfg);
  EXPECT_EQ(verdict.label, L::Refuted);
  EXPECT_EQ(verdict.votes.size(), 1u);
  EXPECT_EQ(verdict.failed_pairs, (std::vector<std::string>{"s:s1", "s:s2", "s:s20"}));

  cfg.multimodal_mode = PromptingMode::OneLevel;
  script[{"verify", "c1", "i3"}] = resp(TokenClass::No, 0.1, 0.9, 0.0);
  script[{"verify", "c1", "s20"}] = resp(TokenClass::None_, 0.0, 0.1, 0.9);
  MockOracle oracle2(script, MockDefault::Error);
  verdict = verify_claim(claim(), pairs, oracle2, cfg);
  EXPECT_EQ(verdict.votes.size(), 4u);
  EXPECT_TRUE(verdict.failed_pairs.empty());
  EXPECT_EQ(verdict.label, L::Supported);
  EXPECT_EQ(verdict.decision_basis, DecisionBasis::Majority);
}

TEST(VerifyClaim, NoUsableVoteIsNei) {
  MockOracle oracle({}, MockDefault::Error);
  const std::vector<EvidencePair> pairs{text_pair("s1")};
  VerifierConfig cfg;
  cfg.text_templates.one_level = builtin_templates().at(template_names::kVerifyOneLevel);
  cfg.text_mode = PromptingMode::OneLevel;
  const auto verdict = verify_claim(claim(), pairs, oracle, cfg);
  EXPECT_EQ(verdict.label, L::NEI);
  EXPECT_EQ(verdict.decision_basis, DecisionBasis::NoEvidence);
  EXPECT_EQ(verdict.failed_pairs, std::vector<std::string>{"s:s1"});
}

TEST(VerifyClaim, NoEvidenceAtAllIsNei) {
  MockOracle oracle({});
  const auto verdict = verify_claim(claim(), {}, oracle, VerifierConfig{});
  EXPECT_EQ(verdict.label, L::NEI);
  EXPECT_EQ(verdict.decision_basis, DecisionBasis::NoEvidence);
}
