// SPDX-License-Identifier: Apache-2.0
#include "evidrank/mock_oracle.hpp"

#include <cmath>

#include "evidrank/jsonl.hpp"

namespace evidrank {

using nlohmann::json;

std::string fingerprint(const MockKey& key) {
  return key.task + "|" + key.claim_id + "|" + key.candidate_id;
}

MockOracle::MockOracle(std::map<MockKey, OracleResponse> script, MockDefault fallback)
    : script_(std::move(script)), fallback_(fallback) {
  for (const auto& [key, resp] : script_) {
    try {
      resp.validate();
    } catch (const ContractError& e) {
      throw IntegrityError("mock script entry " + fingerprint(key) + ": " + e.what());
    }
  }
}

OracleResponse MockOracle::query(const OracleRequest& request) {
  calls_.fetch_add(1, std::memory_order_relaxed);
  MockKey key{request.task, request.claim_id, request.candidate_id};
  if (auto it = script_.find(key); it != script_.end()) return it->second;
  key.candidate_id = "*";
  if (auto it = script_.find(key); it != script_.end()) return it->second;

  if (fallback_ == MockDefault::Error) {
    throw LookupError("mock oracle has no answer for " +
                      fingerprint({request.task, request.claim_id, request.candidate_id}));
  }
  return OracleResponse::from_masses(TokenClass::No, 0.0, 1.0, 0.0, 1.0);
}

std::map<MockKey, OracleResponse> parse_mock_script(std::string_view text,
                                                    const std::string& source) {
  std::map<MockKey, OracleResponse> script;
  for_each_jsonl(text, source, [&](const json& rec, std::size_t line) {
    MockKey key;
    key.claim_id = require_string(rec, "claim_id", source, line);
    key.candidate_id = require_string(rec, "candidate_id", source, line);
    if (rec.contains("task")) key.task = require_string(rec, "task", source, line);

    OracleResponse r;
    try {
      r.generated_class = parse_token_class(require_string(rec, "class", source, line));
    } catch (const MappingError& e) {
      throw ParseError(source, line, e.what());
    }
    auto mass_it = rec.find("class_mass");
    if (mass_it == rec.end() || !mass_it->is_object()) {
      throw ParseError(source, line, "missing or non-object field \"class_mass\"");
    }
    r.class_mass = {0.0, 0.0, 0.0, 0.0};
    bool has_other = false;
    for (const auto& [name, value] : mass_it->items()) {
      if (!value.is_number()) throw ParseError(source, line, "non-numeric class mass");
      TokenClass cls;
      try {
        cls = parse_token_class(name);
      } catch (const MappingError& e) {
        throw ParseError(source, line, e.what());
      }
      r.class_mass[static_cast<std::size_t>(cls)] = value.get<double>();
      has_other = has_other || cls == TokenClass::Other;
    }
    if (!has_other) {
      r.class_mass[3] = std::max(0.0, 1.0 - (r.class_mass[0] + r.class_mass[1] + r.class_mass[2]));
    }
    if (auto p = rec.find("generated_token_prob"); p != rec.end()) {
      if (!p->is_number()) throw ParseError(source, line, "non-numeric generated_token_prob");
      r.generated_token_prob = p->get<double>();
    } else {
      r.generated_token_prob = r.mass(r.generated_class);
    }
    try {
      r.validate();
    } catch (const ContractError& e) {
      throw IntegrityError(source + ":" + std::to_string(line) + ": " + e.what());
    }
    if (!script.emplace(key, r).second) {
      throw IntegrityError(source + ":" + std::to_string(line) + ": duplicate mock key " +
                           fingerprint(key));
    }
  });
  return script;
}

std::map<MockKey, OracleResponse> load_mock_script(const std::filesystem::path& path) {
  return parse_mock_script(read_file(path), path.string());
}

}  // namespace evidrank
