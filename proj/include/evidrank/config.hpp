// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evidrank/metrics.hpp"
#include "evidrank/mock_oracle.hpp"
#include "evidrank/reranker.hpp"
#include "evidrank/retrieval.hpp"
#include "evidrank/verifier.hpp"

namespace evidrank {

struct PathsConfig {
  std::filesystem::path corpus;
  std::filesystem::path claims;
  std::filesystem::path embeddings;
  std::filesystem::path annotations;  // optional
  std::filesystem::path mock_script;  // optional; wins over the endpoint when set
};

struct OracleSettings {
  std::string url;
  std::string text_model = "mistral-7b-instruct";
  std::string vision_model = "llava-1.5-7b";
  std::string api_key_env = "EVIDRANK_ORACLE_KEY";
  std::size_t max_in_flight = 8;
  int timeout_ms = 60'000;
  int max_attempts = 3;
  int initial_backoff_ms = 500;
  int top_logprobs = 20;
  std::size_t text_max_tokens = 2048;
  std::size_t image_relevance_max_tokens = 512;
  std::size_t image_verify_max_tokens = 2048;
  MockDefault mock_default = MockDefault::No;
};

struct RerankSettings {
  RerankConfig rerank;
  std::string text_template = "text-related";
  std::string image_template = "image-same-topic";
  std::vector<Modality> modalities{Modality::Text, Modality::Image};
};

/// Which evidence is verified: the re-ranked top K_evidence or the claim's gold ids.
enum class EvidenceSource { Retrieved, Gold };

struct VerifySettings {
  PromptingMode text_mode = PromptingMode::OneLevel;
  PromptingMode multimodal_mode = PromptingMode::TwoLevel;
  PairModality modality = PairModality::Multimodal;
  EvidenceSource evidence = EvidenceSource::Retrieved;
  std::string text_one_level = "verify-one-level";
  std::string text_sufficiency = "verify-sufficiency";
  std::string text_stance = "verify-stance";
  std::string image_one_level = "verify-one-level-image";
  std::string image_sufficiency = "verify-sufficiency-image";
  std::string image_stance = "verify-stance-image";
  PairingConfig pairing;
  TiePriority tie_priority = kDefaultTiePriority;
};

struct MetricsSettings {
  EmptyGoldPolicy empty_gold = EmptyGoldPolicy::Exclude;
  std::vector<AnnotationLevel> annotation_levels{AnnotationLevel::Overall};
};

struct PipelineConfig {
  PathsConfig paths;
  OracleSettings oracle;
  RetrievalConfig retrieval;
  RerankSettings rerank;
  VerifySettings verify;
  MetricsSettings metrics;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;  // reserved; nothing samples
  std::size_t jobs = 1;

  /// Throws ConfigError: unknown templates, K exceeds N, lambda out of range, ...
  void validate() const;
};

/// Relative paths in the file resolve against `base_dir`. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& config);

/// Command-line overrides; unset fields keep the file value.
struct ConfigOverrides {
  std::optional<std::string> strategy;
  std::optional<std::size_t> k_evidence;
  std::optional<double> lambda;
  std::optional<std::string> oracle_url;
  std::optional<std::filesystem::path> mock_script;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::size_t> jobs;
};

/// Precedence: flag, then EVIDRANK_ORACLE_URL for the endpoint, then the file.
void apply_overrides(PipelineConfig& config, const ConfigOverrides& overrides);

}  // namespace evidrank
