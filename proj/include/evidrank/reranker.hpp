// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evidrank/oracle.hpp"
#include "evidrank/retrieval.hpp"

namespace evidrank {

enum class Strategy { IRS, GaisAll, GaisYN, GaisYNO };

std::string_view to_string(Strategy s) noexcept;
/// "irs", "gais-all", "gais-yn", "gais-yno" (underscores accepted, case-insensitive).
Strategy parse_strategy(std::string_view raw);

/// How GAIS-YN turns the summed Yes/No masses into a probability.
enum class YnNormalization {
  Renormalize,  // p_yes = yes / (yes + no)
  Softmax,      // p_yes = e^yes / (e^yes + e^no)
};

/// What GAIS-YNO does when Other outweighs both Yes and No.
enum class YnoOtherPolicy {
  Exclude,   // decide between Yes and No only
  RankLast,  // flag the candidate and sink it with p = 0
};

struct RerankConfig {
  Strategy strategy = Strategy::GaisYN;
  double lambda = 1e-4;
  std::size_t k_evidence = 5;
  YnNormalization yn_mode = YnNormalization::Renormalize;
  YnoOtherPolicy yno_other = YnoOtherPolicy::Exclude;

  /// lambda must lie in (0, 0.01] so every No score stays below every GAIS-YN Yes score.
  void validate() const;
};

inline constexpr double kMaxLambda = 0.01;

/// Decision of one classifier: the class that feeds the score and its probability.
struct ClassDecision {
  TokenClass cls = TokenClass::No;
  double prob = 0.0;
  std::vector<std::string> flags;
};

/// p_yes for Yes, lambda * (1 - p_no) for No. Any other class is a caller bug (ContractError).
double score_eq1(TokenClass cls, double p_yes, double p_no, double lambda);

/// Generated token and its full-softmax probability. A None/Other token is
/// treated as No with p_no = mass[No] and flagged "other_as_no".
ClassDecision classify_gais_all(const OracleResponse& resp);
/// Yes/No masses normalized against each other; exact ties go to No.
/// Throws DegenerateResponseError when both masses are zero.
ClassDecision classify_gais_yn(const OracleResponse& resp,
                               YnNormalization mode = YnNormalization::Renormalize);
/// Three-way masses (Yes, No, Other = rest); argmax over Yes and No only, ties to No.
ClassDecision classify_gais_yno(const OracleResponse& resp);

struct RerankedCandidate {
  RankedCandidate candidate;
  TokenClass oracle_class = TokenClass::Other;
  double relevance_score = 0.0;
  int final_rank = 0;
  std::vector<std::string> flags;
  bool failed = false;
};

/// Yes block first, then the rest, then failed oracle calls; each block in
/// initial order (score desc, id asc). relevance_score carries r_j.
std::vector<RerankedCandidate> rerank_irs(std::span<const RankedCandidate> candidates,
                                          std::span<const OracleOutcome> outcomes);

/// Scores each candidate with the strategy's classifier and score_eq1, then
/// sorts by (failed last, p desc, r desc, id asc).
std::vector<RerankedCandidate> rerank_gais(std::span<const RankedCandidate> candidates,
                                           std::span<const OracleOutcome> outcomes,
                                           const RerankConfig& config);

std::vector<RerankedCandidate> rerank(std::span<const RankedCandidate> candidates,
                                      std::span<const OracleOutcome> outcomes,
                                      const RerankConfig& config);

/// The first k entries (the evidence handed to verification).
std::vector<RerankedCandidate> select_top_k(std::span<const RerankedCandidate> reranked,
                                            std::size_t k);

}  // namespace evidrank
