// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "evidrank/corpus.hpp"
#include "evidrank/error.hpp"
#include "evidrank/segmenter.hpp"

using namespace evidrank;

namespace {

const char* kTwoDocs =
    R"({"doc_id":"d1","sentences":[{"sent_id":"d1-s0","text":"One."},{"sent_id":"d1-s1","text":"Two."}],"images":[{"image_id":"d1-i0","uri":"file://a.jpg"}]})"
    "\n"
    R"({"doc_id":"d2","sentences":[{"sent_id":"d2-s0","text":"Three."}]})"
    "\n";

}  // namespace

TEST(Corpus, CountsDocumentsSentencesImages) {
  const auto c = parse_corpus(kTwoDocs);
  EXPECT_EQ(c.document_count(), 2u);
  EXPECT_EQ(c.sentence_count(), 3u);
  EXPECT_EQ(c.image_count(), 1u);
  EXPECT_EQ(c.document_of("d1-i0").doc_id, "d1");
  EXPECT_EQ(c.find_sentence("d2-s0")->text, "Three.");
  EXPECT_EQ(c.find_sentence("nope"), nullptr);
  EXPECT_THROW(c.document_of("nope"), LookupError);
}

TEST(Corpus, EmptyInput) {
  EXPECT_EQ(parse_corpus("").document_count(), 0u);
}

TEST(Corpus, DuplicateSentenceIdNamesTheId) {
  const std::string text =
      R"({"doc_id":"d1","sentences":[{"sent_id":"d1-s0","text":"A."}]})"
      "\n"
      R"({"doc_id":"d2","sentences":[{"sent_id":"d1-s0","text":"B."}]})"
      "\n";
  try {
    parse_corpus(text);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("d1-s0"), std::string::npos);
  }
}

TEST(Corpus, MalformedLineReportsLineNumber) {
  const std::string text = std::string(kTwoDocs) + "{not json\n";
  try {
    parse_corpus(text, "c.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Corpus, RawTextIsSegmented) {
  const auto c = parse_corpus(R"({"doc_id":"d9","raw_text":"U.S. grew. Then fell."})");
  ASSERT_EQ(c.sentence_count(), 2u);
  EXPECT_EQ(c.documents()[0].sentences[0].text, "U.S. grew.");
  EXPECT_EQ(c.documents()[0].sentences[1].text, "Then fell.");
}

TEST(Corpus, SerializeRoundTrip) {
  const auto c = parse_corpus(kTwoDocs);
  EXPECT_EQ(parse_corpus(serialize_corpus(c)), c);
}

TEST(Segmenter, SplitsOnTerminalMarks) {
  EXPECT_EQ(segment_document("A. B? C!"), (std::vector<std::string>{"A.", "B?", "C!"}));
}

TEST(Segmenter, EmptyText) {
  EXPECT_TRUE(segment_document("").empty());
  EXPECT_TRUE(segment_document("   \n ").empty());
}

TEST(Segmenter, AbbreviationDoesNotSplit) {
  EXPECT_EQ(segment_document("U.S. grew. Then fell."),
            (std::vector<std::string>{"U.S. grew.", "Then fell."}));
}

TEST(Segmenter, CustomAbbreviationList) {
  SegmenterConfig cfg;
  cfg.abbreviations = {};
  EXPECT_EQ(segment_document("U.S. grew.", cfg).size(), 2u);
}

TEST(Labels, FactifyCollapse) {
  EXPECT_EQ(collapse_factify_labels("Support_Multimodal"), VerdictLabel::Supported);
  EXPECT_EQ(collapse_factify_labels("Support_Text"), VerdictLabel::Supported);
  EXPECT_EQ(collapse_factify_labels("Refute"), VerdictLabel::Refuted);
  EXPECT_EQ(collapse_factify_labels("Insufficient_Text"), VerdictLabel::NEI);
  EXPECT_EQ(collapse_factify_labels("Insufficient_Multimodal"), VerdictLabel::NEI);
  EXPECT_THROW(collapse_factify_labels("Maybe"), MappingError);
}

TEST(Labels, VerdictNames) {
  EXPECT_EQ(parse_verdict_label("SUPPORTED"), VerdictLabel::Supported);
  EXPECT_EQ(parse_verdict_label("nei"), VerdictLabel::NEI);
  EXPECT_EQ(to_string(VerdictLabel::Refuted), "refuted");
}

TEST(Claims, RoundTrip) {
  const std::string text =
      R"({"claim_id":"c1","text":"X","gold_label":"Refute","gold_sentence_ids":["d1-s0"],"gold_image_ids":["d1-i0"]})";
  const auto claims = parse_claims(text);
  ASSERT_EQ(claims.size(), 1u);
  EXPECT_EQ(claims[0].gold_label, VerdictLabel::Refuted);
  EXPECT_TRUE(claims[0].gold_ids(Modality::Image).contains("d1-i0"));
  EXPECT_EQ(parse_claims(serialize_claims(claims)), claims);
}

TEST(Annotations, OverallInvariant) {
  auto line = [](bool entity, bool evidence, bool overall) {
    return std::string(R"({"claim_id":"c1","candidate_id":"s1","modality":"text","entity_level":)") +
           (entity ? "true" : "false") + ",\"evidence_level\":" + (evidence ? "true" : "false") +
           ",\"overall\":" + (overall ? "true" : "false") + "}";
  };
  EXPECT_EQ(parse_annotations(line(true, false, true)).size(), 1u);
  EXPECT_EQ(parse_annotations(line(false, true, true)).size(), 1u);
  EXPECT_THROW(parse_annotations(line(false, false, true)), IntegrityError);
  EXPECT_THROW(parse_annotations(line(true, true, false)), IntegrityError);
}
