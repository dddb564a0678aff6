// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>

#include "evidrank/error.hpp"
#include "evidrank/verifier.hpp"

namespace evidrank {

std::string_view to_string(DecisionBasis b) noexcept {
  switch (b) {
    case DecisionBasis::Majority: return "majority";
    case DecisionBasis::ProbabilityTieBreak: return "probability_tie_break";
    case DecisionBasis::PriorityTieBreak: return "priority_tie_break";
    case DecisionBasis::NoEvidence: return "no_evidence";
  }
  return "majority";
}

Verdict majority_vote(std::span<const Vote> votes, std::string claim_id,
                      const TiePriority& priority) {
  if (votes.empty()) throw ContractError("majority_vote: no votes");

  std::array<std::size_t, 3> count{};
  std::array<double, 3> best_conf{-1.0, -1.0, -1.0};
  for (const auto& v : votes) {
    const auto k = static_cast<std::size_t>(v.label);
    ++count[k];
    if (v.confidence > best_conf[k]) best_conf[k] = v.confidence;
  }

  std::size_t top = 0;
  for (auto c : count) top = std::max(top, c);

  std::vector<VerdictLabel> tied;
  for (auto l : priority) {
    if (count[static_cast<std::size_t>(l)] == top) tied.push_back(l);
  }

  Verdict out;
  out.claim_id = std::move(claim_id);
  out.votes.assign(votes.begin(), votes.end());
  if (tied.size() == 1) {
    out.label = tied.front();
    out.decision_basis = DecisionBasis::Majority;
    return out;
  }

  double conf = -1.0;
  for (auto l : tied) conf = std::max(conf, best_conf[static_cast<std::size_t>(l)]);
  std::vector<VerdictLabel> at_conf;
  for (auto l : tied) {
    if (best_conf[static_cast<std::size_t>(l)] == conf) at_conf.push_back(l);
  }
  out.label = at_conf.front();  // already in priority order
  out.decision_basis =
      at_conf.size() == 1 ? DecisionBasis::ProbabilityTieBreak : DecisionBasis::PriorityTieBreak;
  return out;
}

}  // namespace evidrank
