// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <string>

#include "evidrank/corpus.hpp"
#include "evidrank/error.hpp"

namespace evidrank {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Lookup: return "lookup";
    case ErrorKind::Mapping: return "mapping";
    case ErrorKind::Modality: return "modality";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::Protocol: return "protocol";
    case ErrorKind::DegenerateResponse: return "degenerate-response";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

std::string_view to_string(VerdictLabel label) noexcept {
  switch (label) {
    case VerdictLabel::Refuted: return "refuted";
    case VerdictLabel::Supported: return "supported";
    case VerdictLabel::NEI: return "nei";
  }
  return "unknown";
}

VerdictLabel collapse_factify_labels(std::string_view raw) {
  if (raw == "Support_Text" || raw == "Support_Multimodal") return VerdictLabel::Supported;
  if (raw == "Insufficient_Text" || raw == "Insufficient_Multimodal") return VerdictLabel::NEI;
  if (raw == "Refute") return VerdictLabel::Refuted;
  throw MappingError("unknown Factify label \"" + std::string(raw) + "\"");
}

VerdictLabel parse_verdict_label(std::string_view raw) {
  auto l = lower(raw);
  if (l == "supported") return VerdictLabel::Supported;
  if (l == "refuted") return VerdictLabel::Refuted;
  if (l == "nei") return VerdictLabel::NEI;
  return collapse_factify_labels(raw);
}

std::string_view to_string(Modality modality) noexcept {
  return modality == Modality::Text ? "text" : "image";
}

Modality parse_modality(std::string_view raw) {
  auto l = lower(raw);
  if (l == "text") return Modality::Text;
  if (l == "image") return Modality::Image;
  throw MappingError("unknown modality \"" + std::string(raw) + "\"");
}

}  // namespace evidrank
