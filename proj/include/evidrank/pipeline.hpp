// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string_view>

#include "evidrank/artifacts.hpp"
#include "evidrank/config.hpp"
#include "evidrank/metrics.hpp"
#include "evidrank/oracle.hpp"

namespace evidrank {

enum class Stage { Ingest, Retrieve, Rerank, Verify, Evaluate, Pipeline };

std::string_view to_string(Stage s) noexcept;
Stage parse_stage(std::string_view raw);

/// An Error raised inside a stage, tagged with that stage.
class StageFailure : public Error {
 public:
  StageFailure(Stage stage, const Error& cause);
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

/// 2 config, 3 input integrity, 4 oracle, 5 evaluation, 1 anything else.
int exit_code_for(ErrorKind kind) noexcept;

/// Mock when paths.mock_script is set, else the HTTP endpoint; ConfigError
/// when neither is configured. The API key is read from oracle.api_key_env.
std::unique_ptr<Oracle> make_oracle(const PipelineConfig& config);

using OracleFactory = std::function<std::unique_ptr<Oracle>(const PipelineConfig&)>;

/// Each stage reads its inputs (config paths and earlier artifacts in
/// out_dir) and writes its own artifacts into out_dir.
void run_ingest(const PipelineConfig& config);
void run_retrieve(const PipelineConfig& config);
void run_rerank(const PipelineConfig& config, Oracle& oracle);
void run_verify(const PipelineConfig& config, Oracle& oracle);
Report run_evaluate(const PipelineConfig& config);

/// Runs one stage, or all five in order for Stage::Pipeline. Errors come
/// out as StageFailure. The oracle is created only when a stage needs it.
void run_stage(const PipelineConfig& config, Stage stage,
               const OracleFactory& factory = make_oracle);

/// Builds the evaluation report from in-memory artifacts.
Report build_report(const PipelineConfig& config, const std::vector<Claim>& claims,
                    std::span<const ClaimPool> pools, std::span<const ClaimReranking> rerankings,
                    std::span<const Verdict> verdicts,
                    const std::vector<RelevanceAnnotation>* annotations);

}  // namespace evidrank
