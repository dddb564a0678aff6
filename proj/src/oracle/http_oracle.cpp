// SPDX-License-Identifier: Apache-2.0
#include "evidrank/http_oracle.hpp"

#include <cmath>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace evidrank {

using nlohmann::json;

struct HttpOracle::Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("oracle URL \"" + url + "\" has no scheme");
  }
  if (url.compare(0, scheme_end, "http") != 0) {
    throw ConfigError("oracle URL \"" + url + "\": only http:// endpoints are supported");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  std::string host = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {host, prefix};
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpOracle::HttpOracle(HttpOracleConfig config)
    : config_(std::move(config)),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, config_.max_in_flight))) {
  if (config_.base_url.empty()) throw ConfigError("oracle URL is empty");
  if (config_.max_attempts < 1) throw ConfigError("oracle max_attempts must be >= 1");
  auto [host, prefix] = split_url(config_.base_url);
  endpoint_ = std::make_unique<Endpoint>(Endpoint{std::move(host), std::move(prefix)});
}

HttpOracle::~HttpOracle() = default;

json HttpOracle::completion_body(const OracleRequest& request) const {
  return {{"model", request.model},
          {"prompt", request.prompt},
          {"max_tokens", 1},
          {"temperature", 0},
          {"logprobs", config_.top_logprobs}};
}

json HttpOracle::chat_body(const OracleRequest& request) const {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.prompt}});
  for (const auto& uri : request.image_uris) {
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", uri}}}});
  }
  return {{"model", request.model},
          {"messages", json::array({{{"role", "user"}, {"content", std::move(content)}}})},
          {"max_tokens", 1},
          {"temperature", 0},
          {"logprobs", true},
          {"top_logprobs", config_.top_logprobs}};
}

OracleResponse HttpOracle::parse_response(const json& body, const OracleRequest& request) const {
  try {
    const auto& choice = body.at("choices").at(0);
    const auto& logprobs = choice.at("logprobs");
    if (logprobs.is_null()) throw ProtocolError("response carries no logprobs");

    std::string generated;
    double generated_lp = 0.0;
    std::vector<std::pair<std::string, double>> top;

    if (logprobs.contains("content")) {
      // Chat shape: content[0] = {token, logprob, top_logprobs: [{token, logprob}]}
      const auto& first = logprobs.at("content").at(0);
      generated = first.at("token").get<std::string>();
      generated_lp = first.at("logprob").get<double>();
      for (const auto& t : first.at("top_logprobs")) {
        top.emplace_back(t.at("token").get<std::string>(), std::exp(t.at("logprob").get<double>()));
      }
    } else {
      // Completions shape: tokens[0], token_logprobs[0], top_logprobs[0] = {token: logprob}
      generated = logprobs.at("tokens").at(0).get<std::string>();
      generated_lp = logprobs.at("token_logprobs").at(0).get<double>();
      for (const auto& [token, lp] : logprobs.at("top_logprobs").at(0).items()) {
        top.emplace_back(token, std::exp(lp.get<double>()));
      }
    }
    return response_from_token_probs(generated, std::exp(generated_lp), top, request.classes,
                                     config_.surface_forms);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("response is missing probability data: ") + e.what());
  }
}

OracleResponse HttpOracle::query(const OracleRequest& request) {
  const bool multimodal = !request.image_uris.empty();
  const std::string path =
      endpoint_->path_prefix + (multimodal ? "/chat/completions" : "/completions");
  const std::string payload = (multimodal ? chat_body(request) : completion_body(request)).dump();

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client client(endpoint_->scheme_host_port);
    const auto secs = config_.timeout.count() / 1000;
    const auto usecs = (config_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    auto res = client.Post(path, headers, payload, "application/json");
    if (res && res->status == 200) {
      json body;
      try {
        body = json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("response body is not JSON: ") + e.what());
      }
      return parse_response(body, request);
    }
    if (res && !retryable_status(res->status)) {
      throw ProtocolError("oracle returned HTTP " + std::to_string(res->status) + ": " +
                          res->body.substr(0, 200));
    }
    last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    spdlog::warn("stage=oracle claim_id={} candidate_id={} attempt={} error=\"{}\"",
                 request.claim_id, request.candidate_id, attempt, last_error);
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError("oracle request failed after " + std::to_string(config_.max_attempts) +
                           " attempts: " + last_error,
                       config_.max_attempts);
}

}  // namespace evidrank
