// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "evidrank/config.hpp"
#include "evidrank/pipeline.hpp"

namespace {

template <typename T>
void opt_flag(CLI::App& app, const std::string& name, std::optional<T>& slot, const std::string& help) {
  app.add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evidrank: claim evidence retrieval, oracle re-ranking and verdict prediction"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string stage_name = "pipeline";
  bool quiet = false;
  bool show_config = false;
  evidrank::ConfigOverrides ov;

  app.add_option("--config", config_path, "pipeline config file (JSON)")->required();
  app.add_option("--stage", stage_name, "stage to run when no subcommand is given")
      ->check(CLI::IsMember({"ingest", "retrieve", "rerank", "verify", "evaluate", "pipeline"}));
  opt_flag(app, "--strategy", ov.strategy, "re-ranking strategy: irs, gais-all, gais-yn, gais-yno");
  opt_flag(app, "--k", ov.k_evidence, "evidence items kept per modality for verification");
  opt_flag(app, "--lambda", ov.lambda, "scale of No-answer scores, in (0, 0.01]");
  opt_flag(app, "--oracle-url", ov.oracle_url, "OpenAI-compatible base URL, e.g. http://host:8000/v1");
  std::optional<std::string> mock, out_dir;
  opt_flag(app, "--mock-script", mock, "answer oracle calls from this script");
  opt_flag(app, "--out-dir", out_dir, "artifact directory");
  opt_flag(app, "--jobs", ov.jobs, "claims processed in parallel");
  app.add_flag("-q,--quiet", quiet, "only log warnings and errors");
  app.add_flag("--show-config", show_config, "print the resolved config and exit");

  for (const char* name : {"ingest", "retrieve", "rerank", "verify", "evaluate", "pipeline"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " stage");
    sub->fallthrough();
    sub->callback([&stage_name, name] { stage_name = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto logger = spdlog::stderr_color_mt("evidrank");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %l %v");
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);

  if (mock) ov.mock_script = *mock;
  if (out_dir) ov.out_dir = *out_dir;

  const auto stage = evidrank::parse_stage(stage_name);
  try {
    auto config = evidrank::load_config(config_path);
    evidrank::apply_overrides(config, ov);
    if (show_config) {
      std::cout << evidrank::config_to_json(config).dump(2) << "\n";
      return 0;
    }
    evidrank::run_stage(config, stage);
  } catch (const evidrank::StageFailure& e) {
    spdlog::error("stage={} kind={} {}", evidrank::to_string(e.stage()), evidrank::to_string(e.kind()), e.what());
    return evidrank::exit_code_for(e.kind());
  } catch (const evidrank::Error& e) {
    spdlog::error("stage={} kind={} {}", stage_name, evidrank::to_string(e.kind()), e.what());
    return evidrank::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("stage={} internal error: {}", stage_name, e.what());
    return 1;
  }
  return 0;
}
