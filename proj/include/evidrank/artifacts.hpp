// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evidrank/reranker.hpp"
#include "evidrank/retrieval.hpp"
#include "evidrank/verifier.hpp"

namespace evidrank {

/// Initial top-N pool of one claim in one modality, best first.
struct ClaimPool {
  std::string claim_id;
  Modality modality = Modality::Text;
  std::vector<RankedCandidate> candidates;
};

/// Re-ranked pool of one claim in one modality, final rank order.
struct ClaimReranking {
  std::string claim_id;
  Modality modality = Modality::Text;
  std::vector<RerankedCandidate> ranked;
};

namespace artifact_files {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kClaims = "claims.jsonl";
inline constexpr const char* kRetrieval = "retrieval.jsonl";
inline constexpr const char* kRerank = "rerank.jsonl";
inline constexpr const char* kVerdicts = "verdicts.jsonl";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kReportCsv = "report.csv";
}  // namespace artifact_files

/// One row per candidate, sorted by (claim_id, modality, rank). Parsing
/// groups rows back into pools in the same order.
std::string serialize_retrieval(std::span<const ClaimPool> pools);
std::vector<ClaimPool> parse_retrieval(std::string_view text, const std::string& source = "<memory>");

std::string serialize_rerank(std::span<const ClaimReranking> rerankings);
std::vector<ClaimReranking> parse_rerank(std::string_view text, const std::string& source = "<memory>");

/// One row per claim, sorted by claim_id.
std::string serialize_verdicts(std::span<const Verdict> verdicts);
std::vector<Verdict> parse_verdicts(std::string_view text, const std::string& source = "<memory>");

}  // namespace evidrank
