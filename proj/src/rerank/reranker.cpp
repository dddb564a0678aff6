// SPDX-License-Identifier: Apache-2.0
#include "evidrank/reranker.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace evidrank {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::IRS: return "irs";
    case Strategy::GaisAll: return "gais-all";
    case Strategy::GaisYN: return "gais-yn";
    case Strategy::GaisYNO: return "gais-yno";
  }
  return "irs";
}

Strategy parse_strategy(std::string_view raw) {
  std::string n(raw);
  for (auto& c : n) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "irs") return Strategy::IRS;
  if (n == "gais-all") return Strategy::GaisAll;
  if (n == "gais-yn") return Strategy::GaisYN;
  if (n == "gais-yno") return Strategy::GaisYNO;
  throw ConfigError("unknown re-ranking strategy \"" + std::string(raw) + "\"");
}

void RerankConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= kMaxLambda)) {
    throw ConfigError("lambda must lie in (0, 0.01], got " + std::to_string(lambda));
  }
  if (k_evidence == 0) throw ConfigError("K_evidence must be positive");
}

double score_eq1(TokenClass cls, double p_yes, double p_no, double lambda) {
  switch (cls) {
    case TokenClass::Yes: return p_yes;
    case TokenClass::No: return lambda * (1.0 - p_no);
    default:
      throw ContractError("score_eq1: class " + std::string(to_string(cls)) +
                          " has no relevance score");
  }
}

ClassDecision classify_gais_all(const OracleResponse& resp) {
  switch (resp.generated_class) {
    case TokenClass::Yes: return {TokenClass::Yes, resp.generated_token_prob, {}};
    case TokenClass::No: return {TokenClass::No, resp.generated_token_prob, {}};
    default: return {TokenClass::No, resp.mass(TokenClass::No), {"other_as_no"}};
  }
}

ClassDecision classify_gais_yn(const OracleResponse& resp, YnNormalization mode) {
  const double yes = resp.mass(TokenClass::Yes);
  const double no = resp.mass(TokenClass::No);
  if (yes + no <= 0.0) {
    throw DegenerateResponseError("GAIS-YN: Yes and No masses are both zero");
  }
  double p_yes = 0.0;
  if (mode == YnNormalization::Renormalize) {
    p_yes = yes / (yes + no);
  } else {
    const double ey = std::exp(yes);
    const double en = std::exp(no);
    p_yes = ey / (ey + en);
  }
  if (p_yes > 0.5) return {TokenClass::Yes, p_yes, {}};
  return {TokenClass::No, 1.0 - p_yes, {}};
}

ClassDecision classify_gais_yno(const OracleResponse& resp) {
  const double yes = resp.mass(TokenClass::Yes);
  const double no = resp.mass(TokenClass::No);
  if (yes > no) return {TokenClass::Yes, yes, {}};
  return {TokenClass::No, no, {}};
}

namespace {

RerankedCandidate seed(const RankedCandidate& c) {
  RerankedCandidate r;
  r.candidate = c;
  return r;
}

bool initial_order(const RankedCandidate& a, const RankedCandidate& b) {
  if (a.initial_score != b.initial_score) return a.initial_score > b.initial_score;
  return a.candidate_id < b.candidate_id;
}

void check_sizes(std::span<const RankedCandidate> c, std::span<const OracleOutcome> o) {
  if (c.size() != o.size()) {
    throw ContractError("rerank: " + std::to_string(c.size()) + " candidates but " +
                        std::to_string(o.size()) + " oracle outcomes");
  }
}

void mark_failed(RerankedCandidate& r, const OracleOutcome& o) {
  r.failed = true;
  r.oracle_class = TokenClass::Other;
  r.relevance_score = 0.0;
  r.flags.push_back(std::string("oracle_failed:") +
                    (o.error_kind ? to_string(*o.error_kind) : "unknown"));
}

void assign_ranks(std::vector<RerankedCandidate>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i].final_rank = static_cast<int>(i + 1);
}

}  // namespace

std::vector<RerankedCandidate> rerank_irs(std::span<const RankedCandidate> candidates,
                                          std::span<const OracleOutcome> outcomes) {
  check_sizes(candidates, outcomes);
  std::vector<RerankedCandidate> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto r = seed(candidates[i]);
    if (!outcomes[i].ok()) {
      mark_failed(r, outcomes[i]);
    } else {
      const auto g = outcomes[i].response->generated_class;
      r.oracle_class = g == TokenClass::Yes || g == TokenClass::No ? g : TokenClass::Other;
    }
    r.relevance_score = r.candidate.initial_score;
    out.push_back(std::move(r));
  }
  auto block = [](const RerankedCandidate& r) {
    if (r.failed) return 2;
    return r.oracle_class == TokenClass::Yes ? 0 : 1;
  };
  std::sort(out.begin(), out.end(), [&](const RerankedCandidate& a, const RerankedCandidate& b) {
    if (block(a) != block(b)) return block(a) < block(b);
    return initial_order(a.candidate, b.candidate);
  });
  assign_ranks(out);
  return out;
}

std::vector<RerankedCandidate> rerank_gais(std::span<const RankedCandidate> candidates,
                                           std::span<const OracleOutcome> outcomes,
                                           const RerankConfig& config) {
  check_sizes(candidates, outcomes);
  if (config.strategy == Strategy::IRS) {
    throw ContractError("rerank_gais called with the IRS strategy");
  }
  std::vector<RerankedCandidate> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto r = seed(candidates[i]);
    if (!outcomes[i].ok()) {
      mark_failed(r, outcomes[i]);
      out.push_back(std::move(r));
      continue;
    }
    const auto& resp = *outcomes[i].response;
    try {
      ClassDecision d;
      switch (config.strategy) {
        case Strategy::GaisAll: d = classify_gais_all(resp); break;
        case Strategy::GaisYN: d = classify_gais_yn(resp, config.yn_mode); break;
        default: d = classify_gais_yno(resp); break;
      }
      if (config.strategy == Strategy::GaisYNO && config.yno_other == YnoOtherPolicy::RankLast &&
          resp.mass(TokenClass::Other) > std::max(resp.mass(TokenClass::Yes), resp.mass(TokenClass::No))) {
        r.failed = true;
        r.oracle_class = TokenClass::Other;
        r.relevance_score = 0.0;
        r.flags.push_back("other_wins");
      } else {
        r.oracle_class = d.cls;
        r.relevance_score = d.cls == TokenClass::Yes ? score_eq1(d.cls, d.prob, 0.0, config.lambda)
                                                     : score_eq1(d.cls, 0.0, d.prob, config.lambda);
        r.flags = std::move(d.flags);
      }
    } catch (const Error& e) {
      OracleOutcome failed;
      failed.error_kind = e.kind();
      mark_failed(r, failed);
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const RerankedCandidate& a, const RerankedCandidate& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.relevance_score != b.relevance_score) return a.relevance_score > b.relevance_score;
    return initial_order(a.candidate, b.candidate);
  });
  assign_ranks(out);
  return out;
}

std::vector<RerankedCandidate> rerank(std::span<const RankedCandidate> candidates,
                                      std::span<const OracleOutcome> outcomes,
                                      const RerankConfig& config) {
  if (config.strategy == Strategy::IRS) return rerank_irs(candidates, outcomes);
  return rerank_gais(candidates, outcomes, config);
}

std::vector<RerankedCandidate> select_top_k(std::span<const RerankedCandidate> reranked,
                                            std::size_t k) {
  const auto n = std::min(k, reranked.size());
  return {reranked.begin(), reranked.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace evidrank
