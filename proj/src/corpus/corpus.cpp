// SPDX-License-Identifier: Apache-2.0
#include "evidrank/corpus.hpp"

#include <unordered_set>

#include "evidrank/error.hpp"
#include "evidrank/jsonl.hpp"

namespace evidrank {

using nlohmann::json;

Corpus::Corpus(std::vector<EvidenceDoc> docs) : docs_(std::move(docs)) {
  std::unordered_set<std::string> item_ids;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    const auto& doc = docs_[d];
    if (doc.doc_id.empty()) {
      throw IntegrityError("document with empty doc_id");
    }
    if (!doc_index_.emplace(doc.doc_id, d).second) {
      throw IntegrityError("duplicate doc_id \"" + doc.doc_id + "\"");
    }
    if (doc.sentences.empty() && doc.images.empty()) {
      throw IntegrityError("document \"" + doc.doc_id + "\" has neither sentences nor images");
    }
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const auto& sent = doc.sentences[s];
      if (sent.sent_id.empty()) {
        throw IntegrityError("empty sent_id in document \"" + doc.doc_id + "\"");
      }
      if (sent.doc_id != doc.doc_id) {
        throw IntegrityError("sentence \"" + sent.sent_id + "\" claims doc \"" + sent.doc_id +
                             "\" but is stored in \"" + doc.doc_id + "\"");
      }
      if (trim(sent.text).empty()) {
        throw IntegrityError("sentence \"" + sent.sent_id + "\" has empty text");
      }
      if (!item_ids.insert(sent.sent_id).second) {
        throw IntegrityError("duplicate id \"" + sent.sent_id + "\"");
      }
      sentence_index_.emplace(sent.sent_id, Slot{d, s});
    }
    for (std::size_t i = 0; i < doc.images.size(); ++i) {
      const auto& img = doc.images[i];
      if (img.image_id.empty()) {
        throw IntegrityError("empty image_id in document \"" + doc.doc_id + "\"");
      }
      if (img.doc_id != doc.doc_id) {
        throw IntegrityError("image \"" + img.image_id + "\" claims doc \"" + img.doc_id +
                             "\" but is stored in \"" + doc.doc_id + "\"");
      }
      if (img.uri.empty()) {
        throw IntegrityError("image \"" + img.image_id + "\" has empty uri");
      }
      if (!item_ids.insert(img.image_id).second) {
        throw IntegrityError("duplicate id \"" + img.image_id + "\"");
      }
      image_index_.emplace(img.image_id, Slot{d, i});
    }
  }
}

const EvidenceDoc* Corpus::find_document(std::string_view doc_id) const {
  auto it = doc_index_.find(std::string(doc_id));
  return it == doc_index_.end() ? nullptr : &docs_[it->second];
}

const Sentence* Corpus::find_sentence(std::string_view sent_id) const {
  auto it = sentence_index_.find(std::string(sent_id));
  if (it == sentence_index_.end()) return nullptr;
  return &docs_[it->second.doc].sentences[it->second.item];
}

const ImageRef* Corpus::find_image(std::string_view image_id) const {
  auto it = image_index_.find(std::string(image_id));
  if (it == image_index_.end()) return nullptr;
  return &docs_[it->second.doc].images[it->second.item];
}

const EvidenceDoc& Corpus::document_of(std::string_view item_id) const {
  std::string key(item_id);
  if (auto it = sentence_index_.find(key); it != sentence_index_.end()) {
    return docs_[it->second.doc];
  }
  if (auto it = image_index_.find(key); it != image_index_.end()) {
    return docs_[it->second.doc];
  }
  throw LookupError("unknown evidence id \"" + key + "\"");
}

std::vector<std::string> Corpus::sentence_ids() const {
  std::vector<std::string> out;
  out.reserve(sentence_index_.size());
  for (const auto& doc : docs_) {
    for (const auto& s : doc.sentences) out.push_back(s.sent_id);
  }
  return out;
}

std::vector<std::string> Corpus::image_ids() const {
  std::vector<std::string> out;
  out.reserve(image_index_.size());
  for (const auto& doc : docs_) {
    for (const auto& i : doc.images) out.push_back(i.image_id);
  }
  return out;
}

namespace {

json extra_fields(const json& record, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (const auto& [key, value] : record.items()) {
    bool is_known = false;
    for (const char* k : known) {
      if (key == k) {
        is_known = true;
        break;
      }
    }
    if (!is_known) extra[key] = value;
  }
  return extra;
}

EvidenceDoc parse_document(const json& rec, const std::string& source, std::size_t line,
                           const SegmenterConfig& segmenter) {
  EvidenceDoc doc;
  doc.doc_id = require_string(rec, "doc_id", source, line);
  doc.extra = extra_fields(rec, {"doc_id", "sentences", "raw_text", "images"});

  const bool has_sentences = rec.contains("sentences");
  const bool has_raw = rec.contains("raw_text");
  if (has_sentences && has_raw) {
    throw ParseError(source, line, "record carries both \"sentences\" and \"raw_text\"");
  }
  if (has_sentences) {
    const auto& arr = rec["sentences"];
    if (!arr.is_array()) throw ParseError(source, line, "\"sentences\" is not an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto& s = arr[k];
      if (!s.is_object()) throw ParseError(source, line, "sentence entry is not an object");
      Sentence sent;
      sent.doc_id = doc.doc_id;
      sent.sent_id = s.contains("sent_id") ? require_string(s, "sent_id", source, line)
                                           : doc.doc_id + "-s" + std::to_string(k);
      sent.text = require_string(s, "text", source, line);
      doc.sentences.push_back(std::move(sent));
    }
  } else if (has_raw) {
    if (!rec["raw_text"].is_string()) throw ParseError(source, line, "\"raw_text\" is not a string");
    auto parts = segment_document(rec["raw_text"].get<std::string>(), segmenter);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      doc.sentences.push_back({doc.doc_id + "-s" + std::to_string(k), doc.doc_id, parts[k]});
    }
  }

  if (rec.contains("images")) {
    const auto& arr = rec["images"];
    if (!arr.is_array()) throw ParseError(source, line, "\"images\" is not an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto& i = arr[k];
      if (!i.is_object()) throw ParseError(source, line, "image entry is not an object");
      ImageRef img;
      img.doc_id = doc.doc_id;
      img.image_id = i.contains("image_id") ? require_string(i, "image_id", source, line)
                                            : doc.doc_id + "-i" + std::to_string(k);
      img.uri = require_string(i, "uri", source, line);
      if (i.contains("alt_text") && !i["alt_text"].is_null()) {
        img.alt_text = require_string(i, "alt_text", source, line);
      }
      doc.images.push_back(std::move(img));
    }
  }
  return doc;
}

std::set<std::string> string_set(const json& rec, const char* field, const std::string& source,
                                 std::size_t line) {
  std::set<std::string> out;
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(source, line, std::string("\"") + field + "\" is not an array");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(source, line, std::string("\"") + field + "\" holds a non-string id");
    }
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

Corpus parse_corpus(std::string_view text, const std::string& source,
                    const SegmenterConfig& segmenter) {
  std::vector<EvidenceDoc> docs;
  for_each_jsonl(text, source, [&](const json& rec, std::size_t line) {
    docs.push_back(parse_document(rec, source, line, segmenter));
  });
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, const SegmenterConfig& segmenter) {
  return parse_corpus(read_file(path), path.string(), segmenter);
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents()) {
    json rec = doc.extra;
    rec["doc_id"] = doc.doc_id;
    rec["sentences"] = json::array();
    for (const auto& s : doc.sentences) {
      rec["sentences"].push_back({{"sent_id", s.sent_id}, {"text", s.text}});
    }
    rec["images"] = json::array();
    for (const auto& i : doc.images) {
      json img = {{"image_id", i.image_id}, {"uri", i.uri}};
      if (i.alt_text) img["alt_text"] = *i.alt_text;
      rec["images"].push_back(std::move(img));
    }
    out += dump_line(rec);
    out += '\n';
  }
  return out;
}

std::vector<Claim> parse_claims(std::string_view text, const std::string& source) {
  std::vector<Claim> claims;
  std::unordered_set<std::string> seen;
  for_each_jsonl(text, source, [&](const json& rec, std::size_t line) {
    Claim c;
    c.claim_id = require_string(rec, "claim_id", source, line);
    c.text = require_string(rec, "text", source, line);
    if (c.claim_id.empty()) throw IntegrityError(source + ":" + std::to_string(line) + ": empty claim_id");
    if (trim(c.text).empty()) throw IntegrityError("claim \"" + c.claim_id + "\" has empty text");
    if (!seen.insert(c.claim_id).second) {
      throw IntegrityError("duplicate claim_id \"" + c.claim_id + "\"");
    }
    if (rec.contains("gold_label") && !rec["gold_label"].is_null()) {
      c.gold_label = parse_verdict_label(require_string(rec, "gold_label", source, line));
    }
    c.gold_sentence_ids = string_set(rec, "gold_sentence_ids", source, line);
    c.gold_image_ids = string_set(rec, "gold_image_ids", source, line);
    c.extra = extra_fields(rec, {"claim_id", "text", "gold_label", "gold_sentence_ids",
                                 "gold_image_ids"});
    claims.push_back(std::move(c));
  });
  return claims;
}

std::vector<Claim> load_claims(const std::filesystem::path& path) {
  return parse_claims(read_file(path), path.string());
}

std::string serialize_claims(const std::vector<Claim>& claims) {
  std::string out;
  for (const auto& c : claims) {
    json rec = c.extra;
    rec["claim_id"] = c.claim_id;
    rec["text"] = c.text;
    if (c.gold_label) rec["gold_label"] = std::string(to_string(*c.gold_label));
    rec["gold_sentence_ids"] = c.gold_sentence_ids;
    rec["gold_image_ids"] = c.gold_image_ids;
    out += dump_line(rec);
    out += '\n';
  }
  return out;
}

std::vector<RelevanceAnnotation> parse_annotations(std::string_view text,
                                                   const std::string& source) {
  std::vector<RelevanceAnnotation> out;
  for_each_jsonl(text, source, [&](const json& rec, std::size_t line) {
    RelevanceAnnotation a;
    a.claim_id = require_string(rec, "claim_id", source, line);
    a.candidate_id = require_string(rec, "candidate_id", source, line);
    a.modality = parse_modality(require_string(rec, "modality", source, line));
    a.entity_level = require_bool(rec, "entity_level", source, line);
    a.evidence_level = require_bool(rec, "evidence_level", source, line);
    a.overall = require_bool(rec, "overall", source, line);
    if (a.overall != (a.entity_level || a.evidence_level)) {
      throw IntegrityError(source + ":" + std::to_string(line) + ": annotation (" + a.claim_id +
                           ", " + a.candidate_id +
                           ") violates overall == entity_level || evidence_level");
    }
    out.push_back(std::move(a));
  });
  return out;
}

std::vector<RelevanceAnnotation> load_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_file(path), path.string());
}

}  // namespace evidrank
