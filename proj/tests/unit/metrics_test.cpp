// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "evidrank/error.hpp"
#include "evidrank/metrics.hpp"

using namespace evidrank;

namespace {

using L = VerdictLabel;
using Ids = std::vector<std::string>;

RelevanceAnnotation ann(std::string claim, std::string cand, bool entity, bool evidence) {
  return {std::move(claim), std::move(cand), Modality::Text, entity, evidence, entity || evidence};
}

}  // namespace

TEST(PrecisionRecall, Examples) {
  const Ids r{"a", "b", "c"};
  auto pr = precision_recall_at_k(r, {"b"}, 2);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 1.0);

  pr = precision_recall_at_k(r, {"a", "b"}, 2);
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.recall, 1.0);

  pr = precision_recall_at_k(r, {"z"}, 2);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);

  pr = precision_recall_at_k(Ids{}, {"z"}, 2);
  EXPECT_TRUE(pr.empty_ranking);
  EXPECT_THROW(precision_recall_at_k(r, {"a"}, 0), ContractError);
  EXPECT_THROW(precision_recall_at_k(r, {}, 1), ContractError);
}

TEST(AveragePrecision, Examples) {
  EXPECT_EQ(average_precision_at_k(Ids{"a", "b", "c"}, {"b"}, 3), 0.5);
  EXPECT_EQ(average_precision_at_k(Ids{"g"}, {"g"}, 1), 1.0);
  EXPECT_NEAR(average_precision_at_k(Ids{"g1", "x", "g2"}, {"g1", "g2"}, 3), (1.0 + 2.0 / 3.0) / 2.0,
              1e-15);
  EXPECT_NEAR(average_precision_at_k(Ids{"g1", "x", "g2"}, {"g1", "g2"}, 3), 0.8333, 5e-5);
}

TEST(AveragePrecision, DenominatorIsMinOfGoldAndK) {
  EXPECT_EQ(average_precision_at_k(Ids{"g1", "x"}, {"g1", "g2", "g3"}, 1), 1.0);
  EXPECT_EQ(average_precision_at_k(Ids{"g1", "g2"}, {"g1", "g2", "g3"}, 2), 1.0);
}

TEST(MeanAveragePrecision, Examples) {
  const std::vector<ClaimRanking> r{{"c2", {"x", "g"}}, {"c1", {"g"}}};
  const std::map<std::string, std::set<std::string>> gold{{"c1", {"g"}}, {"c2", {"g"}}};
  auto m = map_at_k(r, gold, 2);
  EXPECT_EQ(m.map, 0.75);
  EXPECT_EQ(m.n_claims, 2u);

  const std::vector<ClaimRanking> one{{"c2", {"x", "g"}}};
  EXPECT_EQ(map_at_k(one, gold, 2).map, average_precision_at_k(one[0].ranking, {"g"}, 2));
}

TEST(MeanAveragePrecision, EmptyGoldPolicy) {
  const std::vector<ClaimRanking> r{{"c1", {"g"}}, {"c2", {"x"}}};
  const std::map<std::string, std::set<std::string>> gold{{"c1", {"g"}}};
  auto m = map_at_k(r, gold, 1, EmptyGoldPolicy::Exclude);
  EXPECT_EQ(m.map, 1.0);
  EXPECT_EQ(m.excluded_claims, Ids{"c2"});
  m = map_at_k(r, gold, 1, EmptyGoldPolicy::CountAsZero);
  EXPECT_EQ(m.map, 0.5);
  EXPECT_EQ(m.n_claims, 2u);

  const std::vector<ClaimRanking> none{{"c2", {"x"}}};
  EXPECT_THROW(map_at_k(none, gold, 1), EvaluationError);
}

TEST(Report, PercentFormatting) {
  EXPECT_EQ(format_percent(0.2714), "27.14");
  EXPECT_EQ(format_percent(1.0), "100.00");
  EXPECT_EQ(format_percent(0.0), "0.00");
}

TEST(Annotations, LevelsDecideRelevance) {
  const std::vector<RelevanceAnnotation> a{ann("c1", "s1", true, false), ann("c1", "s2", false, true)};
  const AnnotationIndex index(a);
  EXPECT_EQ(index.gold("c1", AnnotationLevel::Evidence), (std::set<std::string>{"s2"}));
  EXPECT_EQ(index.gold("c1", AnnotationLevel::Overall), (std::set<std::string>{"s1", "s2"}));
  EXPECT_EQ(index.gold("c1", AnnotationLevel::Entity), (std::set<std::string>{"s1"}));

  const std::vector<ClaimRanking> r{{"c1", {"s1", "s2"}}};
  auto m = evaluate_with_annotations(r, index, AnnotationLevel::Overall, 2);
  EXPECT_EQ(m.metrics.precision, 1.0);
  m = evaluate_with_annotations(r, index, AnnotationLevel::Evidence, 1);
  EXPECT_EQ(m.metrics.precision, 0.0);
}

TEST(Annotations, CoverageListsGaps) {
  const std::vector<RelevanceAnnotation> a{ann("c1", "s1", true, true)};
  const AnnotationIndex index(a);
  const std::vector<ClaimRanking> r{{"c1", {"s1", "s7"}}, {"c9", {"s1"}}};
  const auto m = evaluate_with_annotations(r, index, AnnotationLevel::Overall, 2);
  EXPECT_EQ(m.coverage.claims_without_annotations, Ids{"c9"});
  ASSERT_EQ(m.coverage.unannotated.size(), 1u);
  EXPECT_EQ(m.coverage.unannotated[0].second, "s7");
  EXPECT_EQ(m.metrics.n_claims, 1u);
}

TEST(Annotations, RejectsBrokenAndConflictingRows) {
  auto bad = ann("c1", "s1", false, false);
  bad.overall = true;
  EXPECT_THROW(AnnotationIndex(std::vector<RelevanceAnnotation>{bad}), IntegrityError);
  EXPECT_THROW(AnnotationIndex(std::vector<RelevanceAnnotation>{ann("c1", "s1", true, false),
                                                                ann("c1", "s1", false, true)}),
               IntegrityError);
  EXPECT_NO_THROW(AnnotationIndex(std::vector<RelevanceAnnotation>{ann("c1", "s1", true, false),
                                                                   ann("c1", "s1", true, false)}));
}

TEST(Annotations, UnionPool) {
  const std::vector<std::vector<ClaimRanking>> systems{{{"c1", {"a", "b", "c"}}}, {{"c1", {"c", "d"}}}};
  const auto pool = union_pool(systems, 2);
  EXPECT_EQ(pool.at("c1"), (std::set<std::string>{"a", "b", "c", "d"}));
}

TEST(Classification, PerfectPredictions) {
  std::map<std::string, L> gold;
  for (int i = 0; i < 9; ++i) gold["c" + std::to_string(i)] = static_cast<L>(i % 3);
  const auto m = classification_report(gold, gold);
  for (const auto& s : m.per_class) {
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
    EXPECT_EQ(s.f1, 1.0);
    EXPECT_EQ(s.support, 3u);
  }
  EXPECT_EQ(m.micro_f1, 1.0);
  EXPECT_EQ(m.macro_f1, 1.0);
}

TEST(Classification, AllSupported) {
  std::map<std::string, L> gold, pred;
  for (int i = 0; i < 9; ++i) {
    gold["c" + std::to_string(i)] = static_cast<L>(i % 3);
    pred["c" + std::to_string(i)] = L::Supported;
  }
  const auto m = classification_report(pred, gold);
  EXPECT_NEAR(m.of(L::Supported).precision, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(m.of(L::Supported).recall, 1.0);
  EXPECT_NEAR(m.micro_f1, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(m.of(L::Refuted).f1, 0.0);
  EXPECT_EQ(m.confusion[static_cast<int>(L::Refuted)][static_cast<int>(L::Supported)], 3u);
}

TEST(Classification, Errors) {
  const std::map<std::string, L> gold{{"c1", L::NEI}};
  EXPECT_THROW(classification_report({{"c2", L::NEI}}, gold), EvaluationError);
  EXPECT_THROW(classification_report({}, gold), EvaluationError);
  const auto m = classification_report({{"c1", L::NEI}}, {{"c1", L::NEI}, {"c3", L::Refuted}});
  EXPECT_EQ(m.unpredicted, Ids{"c3"});
}

TEST(Classification, MicroF1EqualsAccuracy) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, L> gold, pred;
    const int n = 1 + static_cast<int>(rng() % 40);
    int correct = 0;
    for (int i = 0; i < n; ++i) {
      const auto id = "c" + std::to_string(i);
      gold[id] = static_cast<L>(rng() % 3);
      pred[id] = static_cast<L>(rng() % 3);
      correct += gold[id] == pred[id];
    }
    EXPECT_NEAR(classification_report(pred, gold).micro_f1, static_cast<double>(correct) / n, 1e-15);
  }
}

TEST(Report, RenderersAgree) {
  Report report;
  RetrievalMetrics m;
  m.k = 1;
  m.precision = 0.2714;
  m.recall = 0.5;
  m.map = 0.2714;
  m.n_claims = 3;
  add_retrieval(report, m, "text", "initial");
  const auto table = render_report_table(report);
  EXPECT_NE(table.find("27.14"), std::string::npos);
  const auto j = nlohmann::json::parse(render_report_json(report));
  EXPECT_EQ(j.at("entries").size(), 3u);
  const auto csv = render_report_csv(report);
  char exact[32];
  std::snprintf(exact, sizeof exact, "%.17g", 0.2714);
  EXPECT_NE(csv.find(exact), std::string::npos) << csv;
}
