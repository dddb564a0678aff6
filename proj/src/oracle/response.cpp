// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "evidrank/oracle.hpp"
#include "evidrank/parallel.hpp"
#include "evidrank/segmenter.hpp"

namespace evidrank {

namespace {

constexpr double kMassTolerance = 1e-6;

std::string normalize_form(std::string_view s) {
  std::string out(trim(s));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(TokenClass c) noexcept {
  switch (c) {
    case TokenClass::Yes: return "yes";
    case TokenClass::No: return "no";
    case TokenClass::None_: return "none";
    case TokenClass::Other: return "other";
  }
  return "other";
}

TokenClass parse_token_class(std::string_view raw) {
  const auto n = normalize_form(raw);
  if (n == "yes") return TokenClass::Yes;
  if (n == "no") return TokenClass::No;
  if (n == "none") return TokenClass::None_;
  if (n == "other") return TokenClass::Other;
  throw MappingError("unknown token class \"" + std::string(raw) + "\"");
}

TokenClassSet::TokenClassSet()
    : TokenClassSet({{TokenClass::Yes, {"yes"}},
                     {TokenClass::No, {"no"}},
                     {TokenClass::None_, {"none"}}}) {}

TokenClassSet::TokenClassSet(std::map<TokenClass, std::set<std::string>> forms) {
  std::unordered_set<std::string> seen;
  for (auto& [cls, set] : forms) {
    if (cls == TokenClass::Other) {
      if (!set.empty()) throw ConfigError("token class Other cannot list surface forms");
      continue;
    }
    for (const auto& f : set) {
      auto n = normalize_form(f);
      if (n.empty()) throw ConfigError("empty surface form for class " + std::string(to_string(cls)));
      if (!seen.insert(n).second) {
        throw ConfigError("surface form \"" + f + "\" is listed under more than one class");
      }
      forms_[cls].insert(std::move(n));
    }
  }
}

TokenClass TokenClassSet::classify(std::string_view token) const {
  const auto n = normalize_form(token);
  for (const auto& [cls, set] : forms_) {
    if (set.contains(n)) return cls;
  }
  return TokenClass::Other;
}

void OracleResponse::validate() const {
  for (double m : class_mass) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ContractError("oracle response: class mass outside [0,1]");
    }
  }
  const double named = mass(TokenClass::Yes) + mass(TokenClass::No) + mass(TokenClass::None_);
  if (named > 1.0 + kMassTolerance) {
    throw ContractError("oracle response: Yes+No+None mass exceeds 1");
  }
  if (std::abs(mass(TokenClass::Other) - (1.0 - named)) > kMassTolerance) {
    throw ContractError("oracle response: Other mass is not the residual");
  }
  if (!(generated_token_prob > 0.0 && generated_token_prob <= 1.0)) {
    throw ContractError("oracle response: generated_token_prob outside (0,1]");
  }
}

OracleResponse OracleResponse::from_masses(TokenClass generated, double yes, double no,
                                           double none, double generated_token_prob) {
  OracleResponse r;
  r.generated_class = generated;
  r.class_mass = {yes, no, none, std::max(0.0, 1.0 - (yes + no + none))};
  r.generated_token_prob = generated_token_prob;
  r.validate();
  return r;
}

OracleResponse response_from_token_probs(
    std::string_view generated_token, double generated_prob,
    std::span<const std::pair<std::string, double>> top_tokens,
    std::span<const TokenClass> requested, const TokenClassSet& surface_forms) {
  auto counted = [&](TokenClass c) {
    return c != TokenClass::Other &&
           std::find(requested.begin(), requested.end(), c) != requested.end();
  };

  OracleResponse r;
  r.class_mass = {0.0, 0.0, 0.0, 0.0};
  std::unordered_set<std::string> seen;
  bool generated_listed = false;
  for (const auto& [token, prob] : top_tokens) {
    if (!seen.insert(token).second) continue;
    if (!(prob >= 0.0 && prob <= 1.0 + kMassTolerance)) {
      throw ProtocolError("token probability outside [0,1] for \"" + token + "\"");
    }
    if (token == generated_token) generated_listed = true;
    const auto cls = surface_forms.classify(token);
    if (counted(cls)) r.class_mass[static_cast<std::size_t>(cls)] += prob;
  }
  if (!generated_listed) {
    const auto cls = surface_forms.classify(generated_token);
    if (counted(cls)) r.class_mass[static_cast<std::size_t>(cls)] += generated_prob;
  }

  const auto gen_cls = surface_forms.classify(generated_token);
  r.generated_class = counted(gen_cls) ? gen_cls : TokenClass::Other;

  double named = r.class_mass[0] + r.class_mass[1] + r.class_mass[2];
  if (r.generated_class == TokenClass::Other && named == 0.0) {
    throw DegenerateResponseError("generated token \"" + std::string(generated_token) +
                                  "\" matches no answer class and no class has probability mass");
  }
  if (named > 1.0 + kMassTolerance) {
    throw ProtocolError("token probabilities sum above 1");
  }
  if (named > 1.0) {
    for (std::size_t i = 0; i < 3; ++i) r.class_mass[i] /= named;
    named = 1.0;
  }
  r.class_mass[3] = std::max(0.0, 1.0 - named);
  r.generated_token_prob = std::clamp(generated_prob, 0.0, 1.0);
  if (r.generated_token_prob <= 0.0) {
    throw ProtocolError("generated token has zero probability");
  }
  return r;
}

std::vector<OracleOutcome> query_batch(Oracle& oracle, std::span<const OracleRequest> requests,
                                       std::size_t max_in_flight) {
  std::vector<OracleOutcome> out(requests.size());
  parallel_for(requests.size(), max_in_flight, [&](std::size_t i) {
    try {
      out[i].response = oracle.query(requests[i]);
    } catch (const Error& e) {
      out[i].error_kind = e.kind();
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace evidrank
