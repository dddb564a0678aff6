// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evidrank/error.hpp"

namespace evidrank {

enum class TokenClass { Yes = 0, No = 1, None_ = 2, Other = 3 };

std::string_view to_string(TokenClass c) noexcept;
TokenClass parse_token_class(std::string_view raw);

/// Surface forms per answer class. Matching trims whitespace and ignores
/// case, so "YES", "yes" and " Yes" all land in Yes. Other is the residual
/// and has no forms.
class TokenClassSet {
 public:
  TokenClassSet();
  explicit TokenClassSet(std::map<TokenClass, std::set<std::string>> forms);

  /// Class of a detokenized string, or Other.
  TokenClass classify(std::string_view token) const;
  const std::map<TokenClass, std::set<std::string>>& forms() const noexcept { return forms_; }

 private:
  std::map<TokenClass, std::set<std::string>> forms_;  // normalized (trimmed, lowercase)
};

/// Probability mass per answer class for the first generated token.
struct OracleResponse {
  TokenClass generated_class = TokenClass::Other;
  std::array<double, 4> class_mass{0.0, 0.0, 0.0, 1.0};
  double generated_token_prob = 1.0;

  double mass(TokenClass c) const noexcept { return class_mass[static_cast<std::size_t>(c)]; }

  /// Throws ContractError if masses fall outside [0,1], Yes+No+None exceeds 1,
  /// Other is not the residual (1e-6), or the token probability is outside (0,1].
  void validate() const;

  /// Builds a response from explicit Yes/No/None masses; Other is the residual.
  static OracleResponse from_masses(TokenClass generated, double yes, double no, double none,
                                    double generated_token_prob);
};

/// Maps the first generated token and the server's top token probabilities
/// onto classes. Only classes listed in `requested` are counted; everything
/// else falls into Other. Repeated token strings are counted once.
OracleResponse response_from_token_probs(
    std::string_view generated_token, double generated_prob,
    std::span<const std::pair<std::string, double>> top_tokens,
    std::span<const TokenClass> requested, const TokenClassSet& surface_forms);

struct OracleRequest {
  std::string task;  // "relevance", "verify", "sufficiency", "stance"
  std::string claim_id;
  std::string candidate_id;
  std::string model;
  std::string prompt;
  std::vector<std::string> image_uris;
  std::vector<TokenClass> classes{TokenClass::Yes, TokenClass::No};
};

/// A generative relevance/verification model. Implementations are safe for
/// concurrent use.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual OracleResponse query(const OracleRequest& request) = 0;
};

struct OracleOutcome {
  std::optional<OracleResponse> response;
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool ok() const noexcept { return response.has_value(); }
};

/// Issues every request with at most `max_in_flight` concurrent calls. The
/// outcome at index i always belongs to request i.
std::vector<OracleOutcome> query_batch(Oracle& oracle, std::span<const OracleRequest> requests,
                                       std::size_t max_in_flight);

}  // namespace evidrank
