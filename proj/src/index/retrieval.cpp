// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "evidrank/error.hpp"
#include "evidrank/retrieval.hpp"

namespace evidrank {

void RetrievalConfig::validate() const {
  if (pool_size == 0) throw ConfigError("retrieval N must be positive");
  if (k_values.empty()) throw ConfigError("retrieval K_values must not be empty");
  for (auto k : k_values) {
    if (k == 0) throw ConfigError("retrieval K values must be positive");
    if (k > pool_size) {
      throw ConfigError("K exceeds N (K=" + std::to_string(k) +
                        ", N=" + std::to_string(pool_size) + ")");
    }
  }
  if (k_evidence == 0) throw ConfigError("K_evidence must be positive");
  if (k_evidence > pool_size) {
    throw ConfigError("K exceeds N (K_evidence=" + std::to_string(k_evidence) +
                      ", N=" + std::to_string(pool_size) + ")");
  }
}

namespace {

VectorIndex build_index(const std::vector<std::string>& ids, const EmbeddingStore& store,
                        Space space, std::vector<std::string>& missing) {
  std::vector<std::string> kept;
  std::vector<float> rows;
  const std::size_t dim = store.dim(space);
  for (const auto& id : ids) {
    auto v = store.find(space, id);
    if (v.empty()) {
      missing.push_back(id);
      continue;
    }
    kept.push_back(id);
    rows.insert(rows.end(), v.begin(), v.end());
  }
  return VectorIndex(dim, std::move(kept), std::move(rows));
}

}  // namespace

Retriever::Retriever(const Corpus& corpus, const EmbeddingStore& embeddings)
    : embeddings_(&embeddings),
      sentences_(build_index(corpus.sentence_ids(), embeddings, Space::Text, missing_text_)),
      images_(build_index(corpus.image_ids(), embeddings, Space::CrossModal, missing_image_)) {}

std::vector<RankedCandidate> Retriever::retrieve(const Claim& claim, Modality modality,
                                                 const RetrievalConfig& config) const {
  const auto& idx = index(modality);
  std::vector<RankedCandidate> out;
  // Nothing to rank: text-only corpora need no cross-modal claim vectors.
  if (idx.size() == 0) return out;

  const Space space = modality == Modality::Text ? Space::Text : Space::CrossModal;
  auto query = embeddings_->find(space, claim.claim_id);
  if (query.empty()) {
    throw LookupError("claim \"" + claim.claim_id + "\" has no " +
                      std::string(to_string(space)) + " embedding");
  }

  auto top = idx.top_n(query, config.pool_size);
  out.reserve(top.size());
  for (std::size_t i = 0; i < top.size(); ++i) {
    out.push_back({idx.id(top[i].row), modality, top[i].score, static_cast<int>(i + 1)});
  }
  return out;
}

std::vector<RankedCandidate> Retriever::retrieve_text(const Claim& claim,
                                                      const RetrievalConfig& config) const {
  return retrieve(claim, Modality::Text, config);
}

std::vector<RankedCandidate> Retriever::retrieve_image(const Claim& claim,
                                                       const RetrievalConfig& config) const {
  return retrieve(claim, Modality::Image, config);
}

}  // namespace evidrank
