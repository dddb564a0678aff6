// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evidrank/corpus.hpp"

namespace evidrank {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  bool empty_ranking = false;
};

/// P@K = |top-K ∩ gold| / K, R@K = |top-K ∩ gold| / |gold|. An empty ranking
/// gives (0, 0) with the flag set. Throws ContractError for K = 0 or empty gold.
PrecisionRecall precision_recall_at_k(std::span<const std::string> ranking,
                                      const std::set<std::string>& gold, std::size_t k);

/// Sum of P@i over gold hits at ranks i <= K, divided by min(|gold|, K).
double average_precision_at_k(std::span<const std::string> ranking,
                              const std::set<std::string>& gold, std::size_t k);

struct ClaimRanking {
  std::string claim_id;
  std::vector<std::string> ranking;
};

/// What happens to claims whose gold set is empty for the evaluated modality.
enum class EmptyGoldPolicy {
  Exclude,      // left out of the averages
  CountAsZero,  // included with P = R = AP = 0
};

std::string_view to_string(EmptyGoldPolicy p) noexcept;
EmptyGoldPolicy parse_empty_gold_policy(std::string_view raw);

struct RetrievalMetrics {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double map = 0.0;
  std::size_t n_claims = 0;
  std::vector<std::string> excluded_claims;  // sorted
};

/// Unweighted means over claims, folded in claim_id order. `golds` maps
/// claim_id to its relevant ids; a claim absent from `golds` has empty gold.
/// Throws EvaluationError when no claim is eligible.
RetrievalMetrics map_at_k(std::span<const ClaimRanking> rankings,
                          const std::map<std::string, std::set<std::string>>& golds, std::size_t k,
                          EmptyGoldPolicy policy = EmptyGoldPolicy::Exclude);

enum class AnnotationLevel { Entity, Evidence, Overall };

std::string_view to_string(AnnotationLevel level) noexcept;
AnnotationLevel parse_annotation_level(std::string_view raw);

/// Annotations grouped by claim and candidate. Construction re-checks the
/// overall == entity || evidence invariant and rejects conflicting duplicates
/// (IntegrityError).
class AnnotationIndex {
 public:
  AnnotationIndex() = default;
  explicit AnnotationIndex(std::span<const RelevanceAnnotation> annotations);

  bool has_claim(const std::string& claim_id) const { return by_claim_.contains(claim_id); }
  const RelevanceAnnotation* find(const std::string& claim_id, const std::string& candidate_id) const;
  /// Candidates annotated true at `level` for the claim.
  std::set<std::string> gold(const std::string& claim_id, AnnotationLevel level) const;
  std::vector<std::string> claim_ids() const;

 private:
  std::map<std::string, std::map<std::string, RelevanceAnnotation>> by_claim_;
};

bool relevant_at(const RelevanceAnnotation& a, AnnotationLevel level) noexcept;

struct CoverageReport {
  std::vector<std::pair<std::string, std::string>> unannotated;  // (claim_id, candidate_id) in top-K
  std::vector<std::string> claims_without_annotations;
};

struct AnnotatedMetrics {
  RetrievalMetrics metrics;
  CoverageReport coverage;
};

/// Gold per claim is the set of candidates annotated true at `level`.
/// Unannotated candidates inside the top-K count as not relevant and are
/// listed in the coverage report; claims with no annotation at all are
/// excluded and listed there too.
AnnotatedMetrics evaluate_with_annotations(std::span<const ClaimRanking> rankings,
                                           const AnnotationIndex& annotations,
                                           AnnotationLevel level, std::size_t k,
                                           EmptyGoldPolicy policy = EmptyGoldPolicy::Exclude);

/// The pool a human annotator has to judge: the union over systems of each
/// claim's top-K ids.
std::map<std::string, std::set<std::string>> union_pool(
    std::span<const std::vector<ClaimRanking>> systems, std::size_t k);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationMetrics {
  std::array<ClassScores, 3> per_class{};  // indexed by VerdictLabel
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  /// confusion[gold][predicted]
  std::array<std::array<std::size_t, 3>, 3> confusion{};
  std::size_t n_claims = 0;
  std::vector<std::string> unpredicted;  // gold claims without a prediction, sorted

  const ClassScores& of(VerdictLabel l) const { return per_class[static_cast<std::size_t>(l)]; }
};

/// Per-class P/R/F1 from the confusion matrix (0 where a denominator is 0)
/// and micro F1 from pooled TP/FP/FN. Throws EvaluationError when a
/// prediction has no gold label or no claim overlaps.
ClassificationMetrics classification_report(const std::map<std::string, VerdictLabel>& predictions,
                                            const std::map<std::string, VerdictLabel>& gold);

/// One row of the machine-readable report.
struct ReportEntry {
  std::string metric;                // "P", "R", "mAP", "precision", "recall", "f1", "micro_f1", ...
  std::optional<std::size_t> k;      // cutoff for ranking metrics
  std::string modality;              // "text", "image" or "verdict"
  std::string ranking;               // "initial", "reranked", "reranked@overall", ... or ""
  std::string label;                 // verdict class for per-class rows, else ""
  double value = 0.0;
  std::size_t n_claims = 0;
};

struct Report {
  std::vector<ReportEntry> entries;
  nlohmann::json notes = nlohmann::json::object();
  std::optional<ClassificationMetrics> verification;
  std::map<std::string, CoverageReport> coverage;  // keyed by "<ranking>/<modality>@K"
};

void add_retrieval(Report& report, const RetrievalMetrics& m, std::string_view modality,
                   std::string_view ranking);
void add_classification(Report& report, const ClassificationMetrics& m);

/// 0.2714 -> "27.14".
std::string format_percent(double value);

nlohmann::json report_to_json(const Report& report);
std::string render_report_json(const Report& report);
std::string render_report_table(const Report& report);
std::string render_report_csv(const Report& report);

}  // namespace evidrank
