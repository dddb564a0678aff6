// SPDX-License-Identifier: Apache-2.0
#include "evidrank/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "evidrank/http_oracle.hpp"
#include "evidrank/jsonl.hpp"
#include "evidrank/mock_oracle.hpp"
#include "evidrank/parallel.hpp"
#include "evidrank/prompt.hpp"

namespace evidrank {

namespace fs = std::filesystem;

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Retrieve: return "retrieve";
    case Stage::Rerank: return "rerank";
    case Stage::Verify: return "verify";
    case Stage::Evaluate: return "evaluate";
    case Stage::Pipeline: return "pipeline";
  }
  return "pipeline";
}

Stage parse_stage(std::string_view raw) {
  for (auto s : {Stage::Ingest, Stage::Retrieve, Stage::Rerank, Stage::Verify, Stage::Evaluate,
                 Stage::Pipeline}) {
    if (to_string(s) == raw) return s;
  }
  throw ConfigError("unknown stage \"" + std::string(raw) + "\"");
}

StageFailure::StageFailure(Stage stage, const Error& cause)
    : Error(cause.kind(), "[" + std::string(to_string(stage)) + "] " + cause.what()), stage_(stage) {}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Parse:
    case ErrorKind::Integrity:
    case ErrorKind::Lookup:
    case ErrorKind::Mapping:
    case ErrorKind::Modality: return 3;
    case ErrorKind::Transport:
    case ErrorKind::Protocol:
    case ErrorKind::DegenerateResponse: return 4;
    case ErrorKind::Evaluation: return 5;
    case ErrorKind::Contract: return 1;
  }
  return 1;
}

std::unique_ptr<Oracle> make_oracle(const PipelineConfig& config) {
  if (!config.paths.mock_script.empty()) {
    return std::make_unique<MockOracle>(load_mock_script(config.paths.mock_script),
                                        config.oracle.mock_default);
  }
  if (config.oracle.url.empty()) {
    throw ConfigError("no oracle configured: set oracle.url, EVIDRANK_ORACLE_URL or a mock script");
  }
  HttpOracleConfig http;
  http.base_url = config.oracle.url;
  if (const char* key = std::getenv(config.oracle.api_key_env.c_str()); key != nullptr) http.api_key = key;
  http.top_logprobs = config.oracle.top_logprobs;
  http.timeout = std::chrono::milliseconds(config.oracle.timeout_ms);
  http.max_attempts = config.oracle.max_attempts;
  http.initial_backoff = std::chrono::milliseconds(config.oracle.initial_backoff_ms);
  http.max_in_flight = config.oracle.max_in_flight;
  return std::make_unique<HttpOracle>(std::move(http));
}

namespace {

using Clock = std::chrono::steady_clock;

fs::path artifact(const PipelineConfig& c, const char* name) { return c.out_dir / name; }

Corpus load_ingested_corpus(const PipelineConfig& c) {
  const auto path = artifact(c, artifact_files::kCorpus);
  return parse_corpus(read_file(path), path.string());
}

std::vector<Claim> load_ingested_claims(const PipelineConfig& c) {
  const auto path = artifact(c, artifact_files::kClaims);
  return parse_claims(read_file(path), path.string());
}

template <typename T>
std::vector<T> load_artifact(const PipelineConfig& c, const char* name,
                             std::vector<T> (*parse)(std::string_view, const std::string&)) {
  const auto path = artifact(c, name);
  return parse(read_file(path), path.string());
}

bool wants(const PipelineConfig& c, Modality m) {
  for (auto x : c.rerank.modalities) {
    if (x == m) return true;
  }
  return false;
}

void log_done(Stage s, Clock::time_point start, std::size_t items) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  spdlog::info("stage={} items={} elapsed_ms={}", to_string(s), items, ms);
}

}  // namespace

void run_ingest(const PipelineConfig& c) {
  const auto start = Clock::now();
  const auto corpus = load_corpus(c.paths.corpus);
  const auto claims = load_claims(c.paths.claims);
  const auto store = load_embeddings(c.paths.embeddings);
  if (!c.paths.annotations.empty()) AnnotationIndex(load_annotations(c.paths.annotations));
  if (!c.paths.mock_script.empty()) load_mock_script(c.paths.mock_script);

  const Retriever retriever(corpus, store);
  for (const auto& id : retriever.missing_sentence_embeddings()) {
    spdlog::warn("stage=ingest candidate_id={} no text embedding; left out of retrieval", id);
  }
  for (const auto& id : retriever.missing_image_embeddings()) {
    spdlog::warn("stage=ingest candidate_id={} no crossmodal embedding; left out of retrieval", id);
  }
  write_file(artifact(c, artifact_files::kCorpus), serialize_corpus(corpus));
  write_file(artifact(c, artifact_files::kClaims), serialize_claims(claims));
  log_done(Stage::Ingest, start, corpus.document_count() + claims.size());
}

void run_retrieve(const PipelineConfig& c) {
  const auto start = Clock::now();
  const auto corpus = load_ingested_corpus(c);
  const auto claims = load_ingested_claims(c);
  const auto store = load_embeddings(c.paths.embeddings);
  const Retriever retriever(corpus, store);

  std::vector<std::vector<ClaimPool>> per_claim(claims.size());
  parallel_for(claims.size(), c.jobs, [&](std::size_t i) {
    for (auto m : {Modality::Text, Modality::Image}) {
      if (!wants(c, m)) continue;
      auto cands = retriever.retrieve(claims[i], m, c.retrieval);
      if (cands.empty()) continue;
      per_claim[i].push_back({claims[i].claim_id, m, std::move(cands)});
    }
  });
  std::vector<ClaimPool> pools;
  for (auto& v : per_claim) {
    for (auto& p : v) pools.push_back(std::move(p));
  }
  write_file(artifact(c, artifact_files::kRetrieval), serialize_retrieval(pools));
  log_done(Stage::Retrieve, start, pools.size());
}

void run_rerank(const PipelineConfig& c, Oracle& oracle) {
  const auto start = Clock::now();
  const auto corpus = load_ingested_corpus(c);
  const auto claims = load_ingested_claims(c);
  const auto pools = load_artifact(c, artifact_files::kRetrieval, &parse_retrieval);
  std::map<std::string, const Claim*> by_id;
  for (const auto& cl : claims) by_id[cl.claim_id] = &cl;

  const auto templates = builtin_templates();
  const auto& text_tmpl = templates.at(c.rerank.text_template);
  const auto& image_tmpl = templates.at(c.rerank.image_template);

  std::vector<ClaimReranking> out(pools.size());
  parallel_for(pools.size(), c.jobs, [&](std::size_t i) {
    const auto& pool = pools[i];
    const auto it = by_id.find(pool.claim_id);
    if (it == by_id.end()) {
      throw IntegrityError("retrieval pool for unknown claim \"" + pool.claim_id + "\"");
    }
    const Claim& claim = *it->second;
    const bool text = pool.modality == Modality::Text;
    std::vector<OracleRequest> requests;
    requests.reserve(pool.candidates.size());
    for (const auto& cand : pool.candidates) {
      RelevanceCandidate item;
      if (text) {
        const auto* s = corpus.find_sentence(cand.candidate_id);
        if (s == nullptr) throw IntegrityError("sentence \"" + cand.candidate_id + "\" is not in the corpus");
        item = *s;
      } else {
        const auto* img = corpus.find_image(cand.candidate_id);
        if (img == nullptr) throw IntegrityError("image \"" + cand.candidate_id + "\" is not in the corpus");
        item = *img;
      }
      const auto prompt = build_relevance_prompt(
          text ? text_tmpl : image_tmpl, claim, item,
          chars_for_tokens(text ? c.oracle.text_max_tokens : c.oracle.image_relevance_max_tokens));
      OracleRequest req;
      req.task = "relevance";
      req.claim_id = claim.claim_id;
      req.candidate_id = cand.candidate_id;
      req.model = text ? c.oracle.text_model : c.oracle.vision_model;
      req.prompt = prompt.text;
      req.image_uris = prompt.image_uris;
      req.classes = (text ? text_tmpl : image_tmpl).answer_classes;
      requests.push_back(std::move(req));
    }
    const auto outcomes = query_batch(oracle, requests, c.oracle.max_in_flight);
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
      const auto& o = outcomes[j];
      if (o.error_kind == ErrorKind::Transport) throw TransportError(o.error, c.oracle.max_attempts);
      if (!o.ok()) {
        spdlog::warn("stage=rerank claim_id={} candidate_id={} error=\"{}\"", claim.claim_id,
                     requests[j].candidate_id, o.error);
      }
    }
    out[i] = {pool.claim_id, pool.modality, rerank(pool.candidates, outcomes, c.rerank.rerank)};
  });
  write_file(artifact(c, artifact_files::kRerank), serialize_rerank(out));
  log_done(Stage::Rerank, start, out.size());
}

namespace {

std::vector<RerankedCandidate> evidence_for(const PipelineConfig& c, const Claim& claim,
                                            const std::map<std::pair<std::string, Modality>,
                                                           const ClaimReranking*>& rr,
                                            Modality m) {
  if (c.verify.evidence == EvidenceSource::Gold) {
    std::vector<RerankedCandidate> out;
    int rank = 0;
    for (const auto& id : claim.gold_ids(m)) {
      RerankedCandidate r;
      r.candidate = {id, m, 0.0, ++rank};
      r.final_rank = rank;
      out.push_back(std::move(r));
    }
    return out;
  }
  const auto it = rr.find({claim.claim_id, m});
  if (it == rr.end()) return {};
  std::vector<RerankedCandidate> usable;
  for (const auto& r : it->second->ranked) {
    if (!r.failed) usable.push_back(r);
  }
  return select_top_k(usable, c.retrieval.k_evidence);
}

}  // namespace

void run_verify(const PipelineConfig& c, Oracle& oracle) {
  const auto start = Clock::now();
  const auto corpus = load_ingested_corpus(c);
  const auto claims = load_ingested_claims(c);
  const auto rerankings = load_artifact(c, artifact_files::kRerank, &parse_rerank);
  const auto store = load_embeddings(c.paths.embeddings);
  std::map<std::pair<std::string, Modality>, const ClaimReranking*> rr;
  for (const auto& r : rerankings) rr[{r.claim_id, r.modality}] = &r;

  const auto templates = builtin_templates();
  VerifierConfig vc;
  vc.text_mode = c.verify.text_mode;
  vc.multimodal_mode = c.verify.multimodal_mode;
  vc.text_templates = {templates.at(c.verify.text_one_level), templates.at(c.verify.text_sufficiency),
                       templates.at(c.verify.text_stance)};
  vc.image_templates = {templates.at(c.verify.image_one_level),
                        templates.at(c.verify.image_sufficiency), templates.at(c.verify.image_stance)};
  vc.text_context = {c.oracle.text_model, chars_for_tokens(c.oracle.text_max_tokens)};
  vc.image_context = {c.oracle.vision_model, chars_for_tokens(c.oracle.image_verify_max_tokens)};
  vc.tie_priority = c.verify.tie_priority;
  vc.max_in_flight = c.oracle.max_in_flight;

  std::vector<Verdict> verdicts(claims.size());
  parallel_for(claims.size(), c.jobs, [&](std::size_t i) {
    const auto& claim = claims[i];
    const auto text_ev = evidence_for(c, claim, rr, Modality::Text);
    const auto image_ev = evidence_for(c, claim, rr, Modality::Image);
    const CompanionScorer scorer = [&](const std::string& id, Modality m) {
      const Space space = m == Modality::Text ? Space::Text : Space::CrossModal;
      const auto q = store.find(space, claim.claim_id);
      const auto v = store.find(space, id);
      if (q.empty() || v.empty() || q.size() != v.size()) return -2.0;
      return cosine(q, v);
    };
    const auto pairs = form_pairs(claim, text_ev, image_ev, corpus, c.verify.modality,
                                  c.verify.pairing, scorer);
    verdicts[i] = verify_claim(claim, pairs, oracle, vc);
  });
  write_file(artifact(c, artifact_files::kVerdicts), serialize_verdicts(verdicts));
  log_done(Stage::Verify, start, verdicts.size());
}

Report build_report(const PipelineConfig& c, const std::vector<Claim>& claims,
                    std::span<const ClaimPool> pools, std::span<const ClaimReranking> rerankings,
                    std::span<const Verdict> verdicts,
                    const std::vector<RelevanceAnnotation>* annotations) {
  Report report;
  nlohmann::json skipped = nlohmann::json::array();
  std::optional<AnnotationIndex> index;
  if (annotations != nullptr) {
    index.emplace(*annotations);
    for (const auto& cl : claims) {
      if (!index->has_claim(cl.claim_id)) {
        spdlog::warn("stage=evaluate claim_id={} no relevance annotations; excluded from annotated metrics",
                     cl.claim_id);
      }
    }
  }

  for (auto m : {Modality::Text, Modality::Image}) {
    const std::string mod(to_string(m));
    std::vector<ClaimRanking> initial, reranked;
    for (const auto& p : pools) {
      if (p.modality != m) continue;
      ClaimRanking cr{p.claim_id, {}};
      for (const auto& cand : p.candidates) cr.ranking.push_back(cand.candidate_id);
      initial.push_back(std::move(cr));
    }
    for (const auto& r : rerankings) {
      if (r.modality != m) continue;
      ClaimRanking cr{r.claim_id, {}};
      for (const auto& cand : r.ranked) cr.ranking.push_back(cand.candidate.candidate_id);
      reranked.push_back(std::move(cr));
    }
    std::map<std::string, std::set<std::string>> golds;
    for (const auto& cl : claims) golds[cl.claim_id] = cl.gold_ids(m);

    for (const auto& [name, rankings] : {std::pair{"initial", &initial}, std::pair{"reranked", &reranked}}) {
      if (rankings->empty()) continue;
      for (auto k : c.retrieval.k_values) {
        try {
          add_retrieval(report, map_at_k(*rankings, golds, k, c.metrics.empty_gold), mod, name);
        } catch (const EvaluationError& e) {
          skipped.push_back(fmt::format("{}/{}@{}: {}", name, mod, k, e.what()));
        }
      }
      if (!index) continue;
      for (auto level : c.metrics.annotation_levels) {
        const auto tag = fmt::format("{}@{}", name, to_string(level));
        for (auto k : c.retrieval.k_values) {
          try {
            auto am = evaluate_with_annotations(*rankings, *index, level, k, c.metrics.empty_gold);
            add_retrieval(report, am.metrics, mod, tag);
            report.coverage[fmt::format("{}/{}@{}", tag, mod, k)] = std::move(am.coverage);
          } catch (const EvaluationError& e) {
            skipped.push_back(fmt::format("{}/{}@{}: {}", tag, mod, k, e.what()));
          }
        }
      }
    }
  }

  std::map<std::string, VerdictLabel> predictions, gold;
  for (const auto& cl : claims) {
    if (cl.gold_label) gold[cl.claim_id] = *cl.gold_label;
  }
  for (const auto& v : verdicts) {
    if (gold.contains(v.claim_id)) predictions[v.claim_id] = v.label;
  }
  if (!verdicts.empty()) {
    try {
      add_classification(report, classification_report(predictions, gold));
    } catch (const EvaluationError& e) {
      skipped.push_back(fmt::format("verdict: {}", e.what()));
    }
  }
  if (report.entries.empty()) {
    throw EvaluationError("nothing to evaluate: no eligible claims for any metric");
  }

  report.notes = {{"ap_denominator", "min(|gold|, K)"},
                  {"averaging", "unweighted mean over claims"},
                  {"empty_gold", to_string(c.metrics.empty_gold)},
                  {"strategy", to_string(c.rerank.rerank.strategy)},
                  {"lambda", c.rerank.rerank.lambda},
                  {"N", c.retrieval.pool_size},
                  {"K_evidence", c.retrieval.k_evidence},
                  {"verify_evidence", c.verify.evidence == EvidenceSource::Retrieved ? "retrieved" : "gold"},
                  {"verify_modality", to_string(c.verify.modality)},
                  {"skipped", skipped}};
  return report;
}

Report run_evaluate(const PipelineConfig& c) {
  const auto start = Clock::now();
  const auto claims = load_ingested_claims(c);
  const auto pools = load_artifact(c, artifact_files::kRetrieval, &parse_retrieval);
  const auto rerankings = load_artifact(c, artifact_files::kRerank, &parse_rerank);
  const auto verdicts = load_artifact(c, artifact_files::kVerdicts, &parse_verdicts);
  std::optional<std::vector<RelevanceAnnotation>> annotations;
  if (!c.paths.annotations.empty()) annotations = load_annotations(c.paths.annotations);

  auto report = build_report(c, claims, pools, rerankings, verdicts,
                             annotations ? &*annotations : nullptr);
  write_file(artifact(c, artifact_files::kReportJson), render_report_json(report));
  write_file(artifact(c, artifact_files::kReportText), render_report_table(report));
  write_file(artifact(c, artifact_files::kReportCsv), render_report_csv(report));
  log_done(Stage::Evaluate, start, report.entries.size());
  return report;
}

void run_stage(const PipelineConfig& config, Stage stage, const OracleFactory& factory) {
  std::unique_ptr<Oracle> oracle;
  auto get_oracle = [&]() -> Oracle& {
    if (!oracle) oracle = factory(config);
    return *oracle;
  };
  auto one = [&](Stage s) {
    try {
      switch (s) {
        case Stage::Ingest: run_ingest(config); break;
        case Stage::Retrieve: run_retrieve(config); break;
        case Stage::Rerank: run_rerank(config, get_oracle()); break;
        case Stage::Verify: run_verify(config, get_oracle()); break;
        case Stage::Evaluate: run_evaluate(config); break;
        case Stage::Pipeline: break;
      }
    } catch (const StageFailure&) {
      throw;
    } catch (const Error& e) {
      throw StageFailure(s, e);
    } catch (const std::filesystem::filesystem_error& e) {
      throw StageFailure(s, IntegrityError(e.what()));
    }
  };
  try {
    config.validate();
  } catch (const Error& e) {
    throw StageFailure(stage, e);
  }
  if (stage != Stage::Pipeline) {
    one(stage);
    return;
  }
  for (auto s : {Stage::Ingest, Stage::Retrieve, Stage::Rerank, Stage::Verify, Stage::Evaluate}) one(s);
}

}  // namespace evidrank
