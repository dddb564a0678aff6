// SPDX-License-Identifier: Apache-2.0
#include "evidrank/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <set>

#include "evidrank/jsonl.hpp"
#include "evidrank/prompt.hpp"

namespace evidrank {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& section, const char* name, std::initializer_list<const char*> allowed) {
  if (!section.is_object()) throw ConfigError(std::string("config: \"") + name + "\" must be an object");
  for (const auto& [key, _] : section.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(std::string("config: unknown key \"") + key + "\" in \"" + name + "\"");
    }
  }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
  if (section.contains(key)) out = section.at(key).get<T>();
}

fs::path resolve(const fs::path& base, const std::string& raw) {
  if (raw.empty()) return {};
  fs::path p(raw);
  return p.is_absolute() ? p : base / p;
}

void read_path(const json& section, const char* key, const fs::path& base, fs::path& out) {
  if (section.contains(key)) out = resolve(base, section.at(key).get<std::string>());
}

MockDefault parse_mock_default(const std::string& raw) {
  if (raw == "no") return MockDefault::No;
  if (raw == "error") return MockDefault::Error;
  throw ConfigError("unknown mock_default \"" + raw + "\"");
}

YnoOtherPolicy parse_yno_other(const std::string& raw) {
  if (raw == "exclude") return YnoOtherPolicy::Exclude;
  if (raw == "rank-last") return YnoOtherPolicy::RankLast;
  throw ConfigError("unknown yno_other policy \"" + raw + "\"");
}

EvidenceSource parse_evidence_source(const std::string& raw) {
  if (raw == "retrieved") return EvidenceSource::Retrieved;
  if (raw == "gold") return EvidenceSource::Gold;
  throw ConfigError("unknown verification evidence source \"" + raw + "\"");
}

void parse_paths(const json& j, const fs::path& base, PathsConfig& p) {
  check_keys(j, "paths", {"corpus", "claims", "embeddings", "annotations", "mock_script"});
  read_path(j, "corpus", base, p.corpus);
  read_path(j, "claims", base, p.claims);
  read_path(j, "embeddings", base, p.embeddings);
  read_path(j, "annotations", base, p.annotations);
  read_path(j, "mock_script", base, p.mock_script);
}

void parse_oracle(const json& j, OracleSettings& o) {
  check_keys(j, "oracle",
             {"url", "text_model", "vision_model", "api_key_env", "max_in_flight", "timeout_ms",
              "max_attempts", "initial_backoff_ms", "top_logprobs", "text_max_tokens",
              "image_relevance_max_tokens", "image_verify_max_tokens", "mock_default"});
  read(j, "url", o.url);
  read(j, "text_model", o.text_model);
  read(j, "vision_model", o.vision_model);
  read(j, "api_key_env", o.api_key_env);
  read(j, "max_in_flight", o.max_in_flight);
  read(j, "timeout_ms", o.timeout_ms);
  read(j, "max_attempts", o.max_attempts);
  read(j, "initial_backoff_ms", o.initial_backoff_ms);
  read(j, "top_logprobs", o.top_logprobs);
  read(j, "text_max_tokens", o.text_max_tokens);
  read(j, "image_relevance_max_tokens", o.image_relevance_max_tokens);
  read(j, "image_verify_max_tokens", o.image_verify_max_tokens);
  if (j.contains("mock_default")) o.mock_default = parse_mock_default(j.at("mock_default").get<std::string>());
}

void parse_retrieval(const json& j, RetrievalConfig& r) {
  check_keys(j, "retrieval", {"N", "K_values", "K_evidence"});
  read(j, "N", r.pool_size);
  read(j, "K_values", r.k_values);
  read(j, "K_evidence", r.k_evidence);
}

void parse_rerank(const json& j, RerankSettings& r) {
  check_keys(j, "rerank", {"strategy", "lambda", "softmax", "yno_other", "text_template",
                           "image_template", "modalities"});
  if (j.contains("strategy")) r.rerank.strategy = parse_strategy(j.at("strategy").get<std::string>());
  read(j, "lambda", r.rerank.lambda);
  if (j.contains("softmax")) {
    r.rerank.yn_mode = j.at("softmax").get<bool>() ? YnNormalization::Softmax : YnNormalization::Renormalize;
  }
  if (j.contains("yno_other")) r.rerank.yno_other = parse_yno_other(j.at("yno_other").get<std::string>());
  read(j, "text_template", r.text_template);
  read(j, "image_template", r.image_template);
  if (j.contains("modalities")) {
    r.modalities.clear();
    for (const auto& m : j.at("modalities")) r.modalities.push_back(parse_modality(m.get<std::string>()));
  }
}

void parse_verify(const json& j, VerifySettings& v) {
  check_keys(j, "verify", {"text_mode", "multimodal_mode", "modality", "evidence", "templates",
                           "max_images_per_sentence", "max_sentences_per_image", "tie_priority"});
  if (j.contains("text_mode")) v.text_mode = parse_prompting_mode(j.at("text_mode").get<std::string>());
  if (j.contains("multimodal_mode")) {
    v.multimodal_mode = parse_prompting_mode(j.at("multimodal_mode").get<std::string>());
  }
  if (j.contains("modality")) v.modality = parse_pair_modality(j.at("modality").get<std::string>());
  if (j.contains("evidence")) v.evidence = parse_evidence_source(j.at("evidence").get<std::string>());
  if (j.contains("templates")) {
    const auto& t = j.at("templates");
    check_keys(t, "verify.templates", {"text_one_level", "text_sufficiency", "text_stance",
                                       "image_one_level", "image_sufficiency", "image_stance"});
    read(t, "text_one_level", v.text_one_level);
    read(t, "text_sufficiency", v.text_sufficiency);
    read(t, "text_stance", v.text_stance);
    read(t, "image_one_level", v.image_one_level);
    read(t, "image_sufficiency", v.image_sufficiency);
    read(t, "image_stance", v.image_stance);
  }
  read(j, "max_images_per_sentence", v.pairing.max_images_per_sentence);
  read(j, "max_sentences_per_image", v.pairing.max_sentences_per_image);
  if (j.contains("tie_priority")) {
    const auto& arr = j.at("tie_priority");
    if (!arr.is_array() || arr.size() != 3) {
      throw ConfigError("verify.tie_priority must list the three verdict labels");
    }
    for (std::size_t i = 0; i < 3; ++i) v.tie_priority[i] = parse_verdict_label(arr[i].get<std::string>());
  }
}

void parse_metrics(const json& j, MetricsSettings& m) {
  check_keys(j, "metrics", {"empty_gold", "annotation_levels"});
  if (j.contains("empty_gold")) m.empty_gold = parse_empty_gold_policy(j.at("empty_gold").get<std::string>());
  if (j.contains("annotation_levels")) {
    m.annotation_levels.clear();
    for (const auto& l : j.at("annotation_levels")) {
      m.annotation_levels.push_back(parse_annotation_level(l.get<std::string>()));
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  retrieval.validate();
  rerank.rerank.validate();
  if (rerank.rerank.k_evidence != retrieval.k_evidence) {
    throw ConfigError("K_evidence differs between retrieval and rerank settings");
  }
  const auto templates = builtin_templates();
  auto require = [&](const std::string& name, std::initializer_list<PromptLayout> layouts) {
    const auto it = templates.find(name);
    if (it == templates.end()) throw ConfigError("unknown prompt template \"" + name + "\"");
    if (std::find(layouts.begin(), layouts.end(), it->second.layout) == layouts.end()) {
      throw ConfigError("prompt template \"" + name + "\" has layout " +
                        std::string(to_string(it->second.layout)) + ", not usable here");
    }
  };
  require(rerank.text_template, {PromptLayout::TextPair});
  require(rerank.image_template, {PromptLayout::ImageQuery});
  require(verify.text_one_level, {PromptLayout::TextPair});
  require(verify.text_sufficiency, {PromptLayout::TextPair});
  require(verify.text_stance, {PromptLayout::TextPair});
  require(verify.image_one_level, {PromptLayout::ImagePair});
  require(verify.image_sufficiency, {PromptLayout::ImagePair});
  require(verify.image_stance, {PromptLayout::ImagePair});

  std::set<VerdictLabel> seen(verify.tie_priority.begin(), verify.tie_priority.end());
  if (seen.size() != 3) throw ConfigError("verify.tie_priority must name each label once");
  if (rerank.modalities.empty()) throw ConfigError("rerank.modalities is empty");
  if (oracle.max_in_flight == 0) throw ConfigError("oracle.max_in_flight must be positive");
  if (oracle.max_attempts < 1) throw ConfigError("oracle.max_attempts must be at least 1");
  if (oracle.timeout_ms <= 0 || oracle.initial_backoff_ms < 0) {
    throw ConfigError("oracle timeouts must be positive");
  }
  if (oracle.top_logprobs < 1) throw ConfigError("oracle.top_logprobs must be at least 1");
  if (oracle.text_max_tokens == 0 || oracle.image_relevance_max_tokens == 0 ||
      oracle.image_verify_max_tokens == 0) {
    throw ConfigError("oracle token limits must be positive");
  }
  if (jobs == 0) throw ConfigError("jobs must be positive");
  if (paths.corpus.empty() || paths.claims.empty() || paths.embeddings.empty()) {
    throw ConfigError("paths.corpus, paths.claims and paths.embeddings are required");
  }
  if (out_dir.empty()) throw ConfigError("out_dir is empty");
}

PipelineConfig parse_config(const json& j, const fs::path& base_dir) {
  PipelineConfig c;
  try {
    check_keys(j, "<root>", {"paths", "oracle", "retrieval", "rerank", "verify", "metrics",
                             "out_dir", "seed", "jobs"});
    if (j.contains("paths")) parse_paths(j.at("paths"), base_dir, c.paths);
    if (j.contains("oracle")) parse_oracle(j.at("oracle"), c.oracle);
    if (j.contains("retrieval")) parse_retrieval(j.at("retrieval"), c.retrieval);
    if (j.contains("rerank")) parse_rerank(j.at("rerank"), c.rerank);
    if (j.contains("verify")) parse_verify(j.at("verify"), c.verify);
    if (j.contains("metrics")) parse_metrics(j.at("metrics"), c.metrics);
    if (j.contains("out_dir")) c.out_dir = resolve(base_dir, j.at("out_dir").get<std::string>());
    read(j, "seed", c.seed);
    read(j, "jobs", c.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.rerank.rerank.k_evidence = c.retrieval.k_evidence;
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(j, path.parent_path());
}

json config_to_json(const PipelineConfig& c) {
  auto modalities = json::array();
  for (auto m : c.rerank.modalities) modalities.push_back(to_string(m));
  auto levels = json::array();
  for (auto l : c.metrics.annotation_levels) levels.push_back(to_string(l));
  auto priority = json::array();
  for (auto l : c.verify.tie_priority) priority.push_back(to_string(l));
  return {
      {"paths",
       {{"corpus", c.paths.corpus.string()},
        {"claims", c.paths.claims.string()},
        {"embeddings", c.paths.embeddings.string()},
        {"annotations", c.paths.annotations.string()},
        {"mock_script", c.paths.mock_script.string()}}},
      {"oracle",
       {{"url", c.oracle.url},
        {"text_model", c.oracle.text_model},
        {"vision_model", c.oracle.vision_model},
        {"api_key_env", c.oracle.api_key_env},
        {"max_in_flight", c.oracle.max_in_flight},
        {"timeout_ms", c.oracle.timeout_ms},
        {"max_attempts", c.oracle.max_attempts},
        {"initial_backoff_ms", c.oracle.initial_backoff_ms},
        {"top_logprobs", c.oracle.top_logprobs},
        {"text_max_tokens", c.oracle.text_max_tokens},
        {"image_relevance_max_tokens", c.oracle.image_relevance_max_tokens},
        {"image_verify_max_tokens", c.oracle.image_verify_max_tokens},
        {"mock_default", c.oracle.mock_default == MockDefault::No ? "no" : "error"}}},
      {"retrieval",
       {{"N", c.retrieval.pool_size},
        {"K_values", c.retrieval.k_values},
        {"K_evidence", c.retrieval.k_evidence}}},
      {"rerank",
       {{"strategy", to_string(c.rerank.rerank.strategy)},
        {"lambda", c.rerank.rerank.lambda},
        {"softmax", c.rerank.rerank.yn_mode == YnNormalization::Softmax},
        {"yno_other", c.rerank.rerank.yno_other == YnoOtherPolicy::Exclude ? "exclude" : "rank-last"},
        {"text_template", c.rerank.text_template},
        {"image_template", c.rerank.image_template},
        {"modalities", modalities}}},
      {"verify",
       {{"text_mode", to_string(c.verify.text_mode)},
        {"multimodal_mode", to_string(c.verify.multimodal_mode)},
        {"modality", to_string(c.verify.modality)},
        {"evidence", c.verify.evidence == EvidenceSource::Retrieved ? "retrieved" : "gold"},
        {"templates",
         {{"text_one_level", c.verify.text_one_level},
          {"text_sufficiency", c.verify.text_sufficiency},
          {"text_stance", c.verify.text_stance},
          {"image_one_level", c.verify.image_one_level},
          {"image_sufficiency", c.verify.image_sufficiency},
          {"image_stance", c.verify.image_stance}}},
        {"max_images_per_sentence", c.verify.pairing.max_images_per_sentence},
        {"max_sentences_per_image", c.verify.pairing.max_sentences_per_image},
        {"tie_priority", priority}}},
      {"metrics", {{"empty_gold", to_string(c.metrics.empty_gold)}, {"annotation_levels", levels}}},
      {"out_dir", c.out_dir.string()},
      {"seed", c.seed},
      {"jobs", c.jobs},
  };
}

void apply_overrides(PipelineConfig& c, const ConfigOverrides& o) {
  if (const char* env = std::getenv("EVIDRANK_ORACLE_URL"); env != nullptr && *env != '\0') {
    c.oracle.url = env;
  }
  if (o.strategy) c.rerank.rerank.strategy = parse_strategy(*o.strategy);
  if (o.k_evidence) {
    c.retrieval.k_evidence = *o.k_evidence;
    c.rerank.rerank.k_evidence = *o.k_evidence;
  }
  if (o.lambda) c.rerank.rerank.lambda = *o.lambda;
  if (o.oracle_url) {
    c.oracle.url = *o.oracle_url;
    if (!o.mock_script) c.paths.mock_script.clear();
  }
  if (o.mock_script) c.paths.mock_script = *o.mock_script;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.jobs) c.jobs = *o.jobs;
}

}  // namespace evidrank
