// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>

#include "evidrank/oracle.hpp"

namespace evidrank {

enum class MockDefault {
  No,     // unknown keys answer class No with mass{No: 1.0}
  Error,  // unknown keys raise LookupError
};

/// Key of a scripted answer. A candidate_id of "*" matches any candidate of
/// the claim for that task; exact keys win over the wildcard.
struct MockKey {
  std::string task = "relevance";
  std::string claim_id;
  std::string candidate_id;

  friend auto operator<=>(const MockKey&, const MockKey&) = default;
};

std::string fingerprint(const MockKey& key);

/// Deterministic in-process oracle answering from a script.
class MockOracle final : public Oracle {
 public:
  explicit MockOracle(std::map<MockKey, OracleResponse> script, MockDefault fallback = MockDefault::No);

  OracleResponse query(const OracleRequest& request) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t size() const noexcept { return script_.size(); }

 private:
  std::map<MockKey, OracleResponse> script_;
  MockDefault fallback_;
  std::atomic<std::size_t> calls_{0};
};

/// Line-delimited {"claim_id","candidate_id","class","class_mass":{...},
/// "generated_token_prob", "task"?}. Missing "task" means "relevance"; a
/// missing "other" mass is the residual; a missing generated_token_prob
/// defaults to the generated class's mass. Invariant-violating lines are
/// rejected with the line number.
std::map<MockKey, OracleResponse> parse_mock_script(std::string_view text,
                                                    const std::string& source = "<memory>");
std::map<MockKey, OracleResponse> load_mock_script(const std::filesystem::path& path);

}  // namespace evidrank
