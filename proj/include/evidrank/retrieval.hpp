// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evidrank/corpus.hpp"
#include "evidrank/embedding.hpp"
#include "evidrank/kernels.hpp"

namespace evidrank {

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws ContractError on a dimension
/// mismatch or a zero-norm input.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const float> u, std::span<const float> v,
              const kernels::KernelTable& kernel);

struct ScoredRow {
  std::size_t row = 0;
  double score = 0.0;
};

/// Row-major matrix of candidate vectors with cached norms. Immutable after
/// construction; all queries are const and thread-safe.
class VectorIndex {
 public:
  VectorIndex() = default;
  VectorIndex(std::size_t dim, std::vector<std::string> ids, std::vector<float> rows);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const float> row(std::size_t r) const { return {rows_.data() + r * dim_, dim_}; }

  /// Cosine of `query` against every row, in row order.
  std::vector<double> scores(std::span<const float> query,
                             const kernels::KernelTable& kernel = kernels::active()) const;

  /// Best `n` rows by (score desc, id asc) via bounded heap selection.
  std::vector<ScoredRow> top_n(std::span<const float> query, std::size_t n,
                               const kernels::KernelTable& kernel = kernels::active()) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> rows_;
  std::vector<double> norms_;
};

struct RankedCandidate {
  std::string candidate_id;
  Modality modality = Modality::Text;
  double initial_score = 0.0;
  int initial_rank = 0;

  friend bool operator==(const RankedCandidate&, const RankedCandidate&) = default;
};

struct RetrievalConfig {
  std::size_t pool_size = 100;                    // N
  std::vector<std::size_t> k_values{1, 2, 5, 10};  // evaluation cutoffs
  std::size_t k_evidence = 5;                     // evidence kept for verification

  /// Throws ConfigError ("K exceeds N", ...).
  void validate() const;
};

/// Initial retriever over the sentences (text space) and images (cross-modal
/// space) of a corpus. Corpus items without an embedding are left out of the
/// pool and listed by missing_*().
class Retriever {
 public:
  Retriever(const Corpus& corpus, const EmbeddingStore& embeddings);

  std::vector<RankedCandidate> retrieve_text(const Claim& claim, const RetrievalConfig& config) const;
  std::vector<RankedCandidate> retrieve_image(const Claim& claim, const RetrievalConfig& config) const;
  std::vector<RankedCandidate> retrieve(const Claim& claim, Modality modality,
                                        const RetrievalConfig& config) const;

  const VectorIndex& index(Modality modality) const {
    return modality == Modality::Text ? sentences_ : images_;
  }
  const std::vector<std::string>& missing_sentence_embeddings() const { return missing_text_; }
  const std::vector<std::string>& missing_image_embeddings() const { return missing_image_; }

 private:
  const EmbeddingStore* embeddings_;
  VectorIndex sentences_;
  VectorIndex images_;
  std::vector<std::string> missing_text_;
  std::vector<std::string> missing_image_;
};

}  // namespace evidrank
