// SPDX-License-Identifier: Apache-2.0
#include "evidrank/artifacts.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "evidrank/error.hpp"
#include "evidrank/jsonl.hpp"

namespace evidrank {

using nlohmann::json;

namespace {

double require_number(const json& r, const char* field, const std::string& source, std::size_t line) {
  const auto it = r.find(field);
  if (it == r.end() || !it->is_number()) {
    throw ParseError(source, line, std::string("field \"") + field + "\" must be a number");
  }
  return it->get<double>();
}

int require_int(const json& r, const char* field, const std::string& source, std::size_t line) {
  const auto it = r.find(field);
  if (it == r.end() || !it->is_number_integer()) {
    throw ParseError(source, line, std::string("field \"") + field + "\" must be an integer");
  }
  return it->get<int>();
}

template <typename Fn>
auto wrap(const std::string& source, std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source, line, e.what());
  }
}

json candidate_json(const std::string& claim_id, const RankedCandidate& c) {
  return {{"claim_id", claim_id},
          {"candidate_id", c.candidate_id},
          {"modality", to_string(c.modality)},
          {"initial_score", c.initial_score},
          {"initial_rank", c.initial_rank}};
}

RankedCandidate candidate_from(const json& r, const std::string& source, std::size_t line) {
  RankedCandidate c;
  c.candidate_id = require_string(r, "candidate_id", source, line);
  c.modality = wrap(source, line, [&] { return parse_modality(require_string(r, "modality", source, line)); });
  c.initial_score = require_number(r, "initial_score", source, line);
  c.initial_rank = require_int(r, "initial_rank", source, line);
  return c;
}

template <typename Pool>
void sort_pools(std::vector<const Pool*>& order) {
  std::sort(order.begin(), order.end(), [](const Pool* a, const Pool* b) {
    return std::tie(a->claim_id, a->modality) < std::tie(b->claim_id, b->modality);
  });
}

}  // namespace

std::string serialize_retrieval(std::span<const ClaimPool> pools) {
  std::vector<const ClaimPool*> order;
  for (const auto& p : pools) order.push_back(&p);
  sort_pools(order);
  std::string out;
  for (const auto* p : order) {
    auto cands = p->candidates;
    std::sort(cands.begin(), cands.end(),
              [](const RankedCandidate& a, const RankedCandidate& b) { return a.initial_rank < b.initial_rank; });
    for (const auto& c : cands) out += dump_line(candidate_json(p->claim_id, c)) + "\n";
  }
  return out;
}

std::vector<ClaimPool> parse_retrieval(std::string_view text, const std::string& source) {
  std::map<std::pair<std::string, Modality>, ClaimPool> pools;
  for_each_jsonl(text, source, [&](const json& r, std::size_t line) {
    const auto claim = require_string(r, "claim_id", source, line);
    auto c = candidate_from(r, source, line);
    auto& pool = pools[{claim, c.modality}];
    pool.claim_id = claim;
    pool.modality = c.modality;
    pool.candidates.push_back(std::move(c));
  });
  std::vector<ClaimPool> out;
  for (auto& [_, p] : pools) {
    std::stable_sort(p.candidates.begin(), p.candidates.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) { return a.initial_rank < b.initial_rank; });
    out.push_back(std::move(p));
  }
  return out;
}

std::string serialize_rerank(std::span<const ClaimReranking> rerankings) {
  std::vector<const ClaimReranking*> order;
  for (const auto& p : rerankings) order.push_back(&p);
  sort_pools(order);
  std::string out;
  for (const auto* p : order) {
    auto ranked = p->ranked;
    std::sort(ranked.begin(), ranked.end(),
              [](const RerankedCandidate& a, const RerankedCandidate& b) { return a.final_rank < b.final_rank; });
    for (const auto& r : ranked) {
      auto j = candidate_json(p->claim_id, r.candidate);
      j["oracle_class"] = to_string(r.oracle_class);
      j["relevance_score"] = r.relevance_score;
      j["final_rank"] = r.final_rank;
      j["flags"] = r.flags;
      j["failed"] = r.failed;
      out += dump_line(j) + "\n";
    }
  }
  return out;
}

std::vector<ClaimReranking> parse_rerank(std::string_view text, const std::string& source) {
  std::map<std::pair<std::string, Modality>, ClaimReranking> pools;
  for_each_jsonl(text, source, [&](const json& r, std::size_t line) {
    const auto claim = require_string(r, "claim_id", source, line);
    RerankedCandidate rc;
    rc.candidate = candidate_from(r, source, line);
    rc.oracle_class =
        wrap(source, line, [&] { return parse_token_class(require_string(r, "oracle_class", source, line)); });
    rc.relevance_score = require_number(r, "relevance_score", source, line);
    rc.final_rank = require_int(r, "final_rank", source, line);
    rc.failed = require_bool(r, "failed", source, line);
    if (const auto f = r.find("flags"); f != r.end()) {
      if (!f->is_array()) throw ParseError(source, line, "field \"flags\" must be an array");
      for (const auto& s : *f) {
        if (!s.is_string()) throw ParseError(source, line, "flags must be strings");
        rc.flags.push_back(s.get<std::string>());
      }
    }
    auto& pool = pools[{claim, rc.candidate.modality}];
    pool.claim_id = claim;
    pool.modality = rc.candidate.modality;
    pool.ranked.push_back(std::move(rc));
  });
  std::vector<ClaimReranking> out;
  for (auto& [_, p] : pools) {
    std::stable_sort(p.ranked.begin(), p.ranked.end(),
                     [](const RerankedCandidate& a, const RerankedCandidate& b) { return a.final_rank < b.final_rank; });
    out.push_back(std::move(p));
  }
  return out;
}

std::string serialize_verdicts(std::span<const Verdict> verdicts) {
  std::vector<const Verdict*> order;
  for (const auto& v : verdicts) order.push_back(&v);
  std::sort(order.begin(), order.end(), [](const Verdict* a, const Verdict* b) { return a->claim_id < b->claim_id; });
  std::string out;
  for (const auto* v : order) {
    json votes = json::array();
    for (const auto& vote : v->votes) {
      json jv{{"pair_id", vote.pair_id}, {"label", to_string(vote.label)}, {"confidence", vote.confidence}};
      if (vote.level_trace) {
        jv["level1"] = to_string(vote.level_trace->level1);
        if (vote.level_trace->level2) jv["level2"] = to_string(*vote.level_trace->level2);
      }
      votes.push_back(std::move(jv));
    }
    out += dump_line({{"claim_id", v->claim_id},
                      {"label", to_string(v->label)},
                      {"decision_basis", to_string(v->decision_basis)},
                      {"votes", votes},
                      {"failed_pairs", v->failed_pairs}}) +
           "\n";
  }
  return out;
}

std::vector<Verdict> parse_verdicts(std::string_view text, const std::string& source) {
  std::vector<Verdict> out;
  for_each_jsonl(text, source, [&](const json& r, std::size_t line) {
    Verdict v;
    v.claim_id = require_string(r, "claim_id", source, line);
    v.label = wrap(source, line, [&] { return parse_verdict_label(require_string(r, "label", source, line)); });
    const auto basis = require_string(r, "decision_basis", source, line);
    bool known = false;
    for (auto b : {DecisionBasis::Majority, DecisionBasis::ProbabilityTieBreak,
                   DecisionBasis::PriorityTieBreak, DecisionBasis::NoEvidence}) {
      if (to_string(b) == basis) {
        v.decision_basis = b;
        known = true;
      }
    }
    if (!known) throw ParseError(source, line, "unknown decision_basis \"" + basis + "\"");
    if (const auto votes = r.find("votes"); votes != r.end() && votes->is_array()) {
      for (const auto& jv : *votes) {
        Vote vote;
        vote.pair_id = require_string(jv, "pair_id", source, line);
        vote.label = wrap(source, line, [&] { return parse_verdict_label(require_string(jv, "label", source, line)); });
        vote.confidence = require_number(jv, "confidence", source, line);
        if (jv.contains("level1")) {
          LevelTrace t;
          t.level1 = wrap(source, line, [&] { return parse_token_class(require_string(jv, "level1", source, line)); });
          if (jv.contains("level2")) {
            t.level2 = wrap(source, line, [&] { return parse_token_class(require_string(jv, "level2", source, line)); });
          }
          vote.level_trace = t;
        }
        v.votes.push_back(std::move(vote));
      }
    }
    if (const auto f = r.find("failed_pairs"); f != r.end() && f->is_array()) {
      for (const auto& s : *f) v.failed_pairs.push_back(s.get<std::string>());
    }
    out.push_back(std::move(v));
  });
  return out;
}

}  // namespace evidrank
