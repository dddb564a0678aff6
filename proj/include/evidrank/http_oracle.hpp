// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include <json.hpp>

#include "evidrank/oracle.hpp"

namespace evidrank {

struct HttpOracleConfig {
  /// e.g. "http://localhost:8000/v1"; text prompts go to {base}/completions,
  /// prompts with images to {base}/chat/completions.
  std::string base_url;
  std::string api_key;
  int top_logprobs = 20;
  std::chrono::milliseconds timeout{60'000};
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::size_t max_in_flight = 8;
  TokenClassSet surface_forms;
};

/// Client for OpenAI-compatible completion servers. Asks for exactly one
/// token with top log-probabilities and converts them into class masses.
/// Transport failures and 429/5xx replies are retried with exponential
/// backoff; other HTTP errors fail immediately.
class HttpOracle final : public Oracle {
 public:
  explicit HttpOracle(HttpOracleConfig config);
  ~HttpOracle() override;

  OracleResponse query(const OracleRequest& request) override;

  /// Request payloads, exposed for protocol tests.
  nlohmann::json completion_body(const OracleRequest& request) const;
  nlohmann::json chat_body(const OracleRequest& request) const;

  /// Parses either response shape into a class response.
  OracleResponse parse_response(const nlohmann::json& body, const OracleRequest& request) const;

 private:
  struct Endpoint;

  HttpOracleConfig config_;
  std::unique_ptr<Endpoint> endpoint_;
  std::counting_semaphore<> in_flight_;
};

}  // namespace evidrank
