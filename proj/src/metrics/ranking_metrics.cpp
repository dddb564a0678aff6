// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "evidrank/error.hpp"
#include "evidrank/metrics.hpp"

namespace evidrank {

namespace {

void check_args(const std::set<std::string>& gold, std::size_t k, const char* op) {
  if (k == 0) throw ContractError(std::string(op) + ": K must be positive");
  if (gold.empty()) throw ContractError(std::string(op) + ": gold set is empty");
}

std::size_t hits_at(std::span<const std::string> ranking, const std::set<std::string>& gold,
                    std::size_t k) {
  std::size_t hits = 0;
  const auto n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) hits += gold.contains(ranking[i]) ? 1 : 0;
  return hits;
}

}  // namespace

PrecisionRecall precision_recall_at_k(std::span<const std::string> ranking,
                                      const std::set<std::string>& gold, std::size_t k) {
  check_args(gold, k, "precision_recall_at_k");
  if (ranking.empty()) return {0.0, 0.0, true};
  const auto hits = static_cast<double>(hits_at(ranking, gold, k));
  return {hits / static_cast<double>(k), hits / static_cast<double>(gold.size()), false};
}

double average_precision_at_k(std::span<const std::string> ranking,
                              const std::set<std::string>& gold, std::size_t k) {
  check_args(gold, k, "average_precision_at_k");
  double sum = 0.0;
  std::size_t hits = 0;
  const auto n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.contains(ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(gold.size(), k));
}

std::string_view to_string(EmptyGoldPolicy p) noexcept {
  return p == EmptyGoldPolicy::Exclude ? "exclude" : "count-as-zero";
}

EmptyGoldPolicy parse_empty_gold_policy(std::string_view raw) {
  if (raw == "exclude") return EmptyGoldPolicy::Exclude;
  if (raw == "count-as-zero" || raw == "zero") return EmptyGoldPolicy::CountAsZero;
  throw ConfigError("unknown empty-gold policy \"" + std::string(raw) + "\"");
}

RetrievalMetrics map_at_k(std::span<const ClaimRanking> rankings,
                          const std::map<std::string, std::set<std::string>>& golds, std::size_t k,
                          EmptyGoldPolicy policy) {
  if (k == 0) throw ContractError("map_at_k: K must be positive");
  std::vector<const ClaimRanking*> order;
  order.reserve(rankings.size());
  for (const auto& r : rankings) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const ClaimRanking* a, const ClaimRanking* b) { return a->claim_id < b->claim_id; });

  RetrievalMetrics out;
  out.k = k;
  double p = 0.0, r = 0.0, ap = 0.0;
  static const std::set<std::string> kEmpty;
  for (const auto* cr : order) {
    const auto it = golds.find(cr->claim_id);
    const auto& gold = it == golds.end() ? kEmpty : it->second;
    if (gold.empty()) {
      if (policy == EmptyGoldPolicy::Exclude) {
        out.excluded_claims.push_back(cr->claim_id);
      } else {
        ++out.n_claims;
      }
      continue;
    }
    const auto pr = precision_recall_at_k(cr->ranking, gold, k);
    p += pr.precision;
    r += pr.recall;
    ap += average_precision_at_k(cr->ranking, gold, k);
    ++out.n_claims;
  }
  if (out.n_claims == 0) {
    throw EvaluationError("no claim with a non-empty gold set to evaluate at K=" + std::to_string(k));
  }
  const auto n = static_cast<double>(out.n_claims);
  out.precision = p / n;
  out.recall = r / n;
  out.map = ap / n;
  return out;
}

std::string_view to_string(AnnotationLevel level) noexcept {
  switch (level) {
    case AnnotationLevel::Entity: return "entity";
    case AnnotationLevel::Evidence: return "evidence";
    case AnnotationLevel::Overall: return "overall";
  }
  return "overall";
}

AnnotationLevel parse_annotation_level(std::string_view raw) {
  if (raw == "entity") return AnnotationLevel::Entity;
  if (raw == "evidence") return AnnotationLevel::Evidence;
  if (raw == "overall") return AnnotationLevel::Overall;
  throw ConfigError("unknown annotation level \"" + std::string(raw) + "\"");
}

bool relevant_at(const RelevanceAnnotation& a, AnnotationLevel level) noexcept {
  switch (level) {
    case AnnotationLevel::Entity: return a.entity_level;
    case AnnotationLevel::Evidence: return a.evidence_level;
    case AnnotationLevel::Overall: return a.overall;
  }
  return false;
}

AnnotationIndex::AnnotationIndex(std::span<const RelevanceAnnotation> annotations) {
  for (const auto& a : annotations) {
    if (a.overall != (a.entity_level || a.evidence_level)) {
      throw IntegrityError("annotation (" + a.claim_id + ", " + a.candidate_id +
                           "): overall must equal entity_level OR evidence_level");
    }
    auto& slot = by_claim_[a.claim_id];
    const auto [it, inserted] = slot.emplace(a.candidate_id, a);
    if (!inserted) {
      const auto& b = it->second;
      if (b.entity_level != a.entity_level || b.evidence_level != a.evidence_level ||
          b.modality != a.modality) {
        throw IntegrityError("conflicting annotations for (" + a.claim_id + ", " + a.candidate_id + ")");
      }
    }
  }
}

const RelevanceAnnotation* AnnotationIndex::find(const std::string& claim_id,
                                                 const std::string& candidate_id) const {
  const auto c = by_claim_.find(claim_id);
  if (c == by_claim_.end()) return nullptr;
  const auto a = c->second.find(candidate_id);
  return a == c->second.end() ? nullptr : &a->second;
}

std::set<std::string> AnnotationIndex::gold(const std::string& claim_id, AnnotationLevel level) const {
  std::set<std::string> out;
  const auto c = by_claim_.find(claim_id);
  if (c == by_claim_.end()) return out;
  for (const auto& [id, a] : c->second) {
    if (relevant_at(a, level)) out.insert(id);
  }
  return out;
}

std::vector<std::string> AnnotationIndex::claim_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : by_claim_) out.push_back(id);
  return out;
}

AnnotatedMetrics evaluate_with_annotations(std::span<const ClaimRanking> rankings,
                                           const AnnotationIndex& annotations,
                                           AnnotationLevel level, std::size_t k,
                                           EmptyGoldPolicy policy) {
  AnnotatedMetrics out;
  std::vector<ClaimRanking> kept;
  std::map<std::string, std::set<std::string>> golds;
  for (const auto& r : rankings) {
    if (!annotations.has_claim(r.claim_id)) {
      out.coverage.claims_without_annotations.push_back(r.claim_id);
      continue;
    }
    const auto n = std::min(k, r.ranking.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (annotations.find(r.claim_id, r.ranking[i]) == nullptr) {
        out.coverage.unannotated.emplace_back(r.claim_id, r.ranking[i]);
      }
    }
    golds[r.claim_id] = annotations.gold(r.claim_id, level);
    kept.push_back(r);
  }
  std::sort(out.coverage.claims_without_annotations.begin(),
            out.coverage.claims_without_annotations.end());
  std::sort(out.coverage.unannotated.begin(), out.coverage.unannotated.end());
  out.metrics = map_at_k(kept, golds, k, policy);
  return out;
}

std::map<std::string, std::set<std::string>> union_pool(
    std::span<const std::vector<ClaimRanking>> systems, std::size_t k) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& system : systems) {
    for (const auto& r : system) {
      auto& pool = out[r.claim_id];
      const auto n = std::min(k, r.ranking.size());
      pool.insert(r.ranking.begin(), r.ranking.begin() + static_cast<std::ptrdiff_t>(n));
    }
  }
  return out;
}

}  // namespace evidrank
