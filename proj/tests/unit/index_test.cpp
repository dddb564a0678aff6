// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>

#include "evidrank/embedding.hpp"
#include "evidrank/error.hpp"
#include "evidrank/kernels.hpp"
#include "evidrank/retrieval.hpp"

using namespace evidrank;

namespace {

std::vector<float> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<float> d(0.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<kernels::Isa> simd_isas() {
  std::vector<kernels::Isa> out;
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (kernels::isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

// Three sentences whose cosines with the claim vector [1, 0] are the given values.
EmbeddingStore store_with_scores(const std::vector<std::pair<std::string, double>>& scores,
                                 Space space) {
  EmbeddingStore s;
  s.add({"c1", space, {1.0f, 0.0f}});
  for (const auto& [id, cos] : scores) {
    s.add({id, space, {static_cast<float>(cos), static_cast<float>(std::sqrt(1.0 - cos * cos))}});
  }
  return s;
}

}  // namespace

TEST(Kernels, ScalarMatchesSimdBitExact) {
  const auto isas = simd_isas();
  if (isas.empty()) GTEST_SKIP() << "no SIMD variant on this machine";
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 100u, 511u, 768u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto a = random_vec(rng, n), b = random_vec(rng, n);
      const double ref = kernels::scalar::dot(a.data(), b.data(), n);
      for (auto isa : isas) {
        const double got = kernels::table(isa).dot(a.data(), b.data(), n);
        EXPECT_EQ(std::bit_cast<std::uint64_t>(ref), std::bit_cast<std::uint64_t>(got))
            << kernels::to_string(isa) << " n=" << n;
      }
    }
  }
}

TEST(Kernels, DotRowsMatchesDot) {
  std::mt19937_64 rng(11);
  const std::size_t dim = 37, rows = 13;
  const auto q = random_vec(rng, dim);
  const auto m = random_vec(rng, dim * rows);
  std::vector<kernels::Isa> isas{kernels::Isa::Scalar};
  for (auto i : simd_isas()) isas.push_back(i);
  for (auto isa : isas) {
    const auto& k = kernels::table(isa);
    std::vector<double> out(rows);
    k.dot_rows(q.data(), m.data(), rows, dim, out.data());
    for (std::size_t r = 0; r < rows; ++r) {
      EXPECT_EQ(out[r], kernels::scalar::dot(q.data(), m.data() + r * dim, dim));
    }
  }
}

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(kernels::isa_supported(kernels::Isa::Scalar));
  EXPECT_EQ(kernels::table(kernels::Isa::Scalar).isa, kernels::Isa::Scalar);
}

TEST(Cosine, Examples) {
  const std::vector<float> e1{1, 0}, e2{0, 1}, d{1, 1};
  EXPECT_DOUBLE_EQ(cosine(e1, e1), 1.0);
  EXPECT_DOUBLE_EQ(cosine(e1, e2), 0.0);
  EXPECT_NEAR(cosine(d, e1), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Cosine, Errors) {
  const std::vector<float> a{1, 0}, b{1, 0, 0}, z{0, 0};
  EXPECT_THROW(cosine(a, b), ContractError);
  EXPECT_THROW(cosine(a, z), ContractError);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto u = random_vec(rng, 24), v = random_vec(rng, 24);
    const double c = cosine(u, v);
    EXPECT_EQ(c, cosine(v, u));
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    for (auto& x : u) x *= 4.0f;  // power of two keeps the floats exact
    EXPECT_NEAR(cosine(u, v), c, 1e-12);
  }
}

TEST(VectorIndex, TopNMatchesBruteForce) {
  std::mt19937_64 rng(5);
  const std::size_t dim = 16;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<std::string> ids;
    std::vector<float> rows;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("x" + std::to_string(rng() % 1000) + "-" + std::to_string(i));
      auto v = random_vec(rng, dim);
      // Duplicate a few rows so equal scores exercise the id tie-break.
      if (i > 0 && rng() % 5 == 0) v.assign(rows.end() - dim, rows.end());
      rows.insert(rows.end(), v.begin(), v.end());
    }
    VectorIndex index(dim, ids, rows);
    const auto q = random_vec(rng, dim);
    const auto scores = index.scores(q);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return ids[a] < ids[b];
    });
    for (std::size_t top : {std::size_t{1}, std::size_t{5}, n, n + 10}) {
      const auto got = index.top_n(q, top);
      ASSERT_EQ(got.size(), std::min(top, n));
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].row, order[i]);
        EXPECT_EQ(got[i].score, scores[order[i]]);
      }
    }
  }
}

TEST(Retriever, TextExamples) {
  const auto corpus = parse_corpus(
      R"({"doc_id":"d1","sentences":[{"sent_id":"s1","text":"a."},{"sent_id":"s2","text":"b."},{"sent_id":"s3","text":"c."}]})");
  const auto store = store_with_scores({{"s1", 0.9}, {"s2", 0.2}, {"s3", 0.5}}, Space::Text);
  Retriever r(corpus, store);
  Claim claim;
  claim.claim_id = "c1";
  RetrievalConfig cfg;
  cfg.pool_size = 2;
  cfg.k_values = {1};
  cfg.k_evidence = 1;
  auto got = r.retrieve_text(claim, cfg);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].candidate_id, "s1");
  EXPECT_EQ(got[1].candidate_id, "s3");
  EXPECT_EQ(got[0].initial_rank, 1);
  EXPECT_EQ(got[1].initial_rank, 2);

  cfg.pool_size = 100;
  got = r.retrieve_text(claim, cfg);
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[2].candidate_id, "s2");
}

TEST(Retriever, EqualScoresOrderById) {
  const auto corpus = parse_corpus(
      R"({"doc_id":"d1","sentences":[{"sent_id":"sb","text":"a."},{"sent_id":"sa","text":"b."}]})");
  const auto store = store_with_scores({{"sb", 0.5}, {"sa", 0.5}}, Space::Text);
  Retriever r(corpus, store);
  Claim claim;
  claim.claim_id = "c1";
  const auto got = r.retrieve_text(claim, RetrievalConfig{});
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].candidate_id, "sa");
  EXPECT_EQ(got[1].candidate_id, "sb");
}

TEST(Retriever, ImageExamples) {
  const auto corpus = parse_corpus(
      R"({"doc_id":"d1","sentences":[],"images":[{"image_id":"i1","uri":"u1"},{"image_id":"i2","uri":"u2"}]})");
  const auto store = store_with_scores({{"i1", 0.1}, {"i2", 0.8}}, Space::CrossModal);
  Retriever r(corpus, store);
  Claim claim;
  claim.claim_id = "c1";
  const auto got = r.retrieve_image(claim, RetrievalConfig{});
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].candidate_id, "i2");
  EXPECT_EQ(got[1].candidate_id, "i1");

  Claim stranger;
  stranger.claim_id = "c2";
  EXPECT_THROW(r.retrieve_image(stranger, RetrievalConfig{}), LookupError);
}

TEST(Retriever, EmptyImageIndex) {
  const auto corpus =
      parse_corpus(R"({"doc_id":"d1","sentences":[{"sent_id":"s1","text":"a."}]})");
  EmbeddingStore store;
  store.add({"c1", Space::CrossModal, {1.0f, 0.0f}});
  store.add({"c1", Space::Text, {1.0f, 0.0f}});
  store.add({"s1", Space::Text, {1.0f, 0.0f}});
  Retriever r(corpus, store);
  Claim claim;
  claim.claim_id = "c1";
  EXPECT_TRUE(r.retrieve_image(claim, RetrievalConfig{}).empty());
}

TEST(RetrievalConfig, KExceedsN) {
  RetrievalConfig cfg;
  cfg.pool_size = 10;
  cfg.k_values = {20};
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("K exceeds N"), std::string::npos);
  }
}

TEST(Embeddings, SidecarMatchesJsonlBitExact) {
  std::mt19937_64 rng(9);
  EmbeddingStore store;
  for (int i = 0; i < 20; ++i) store.add({"t" + std::to_string(i), Space::Text, random_vec(rng, 12)});
  for (int i = 0; i < 7; ++i) store.add({"x" + std::to_string(i), Space::CrossModal, random_vec(rng, 8)});
  const auto from_jsonl = parse_embeddings_jsonl(serialize_embeddings_jsonl(store));
  EXPECT_EQ(from_jsonl, store);

  const auto dir = std::filesystem::temp_directory_path() / "evidrank_sidecar_test";
  std::filesystem::create_directories(dir);
  write_embedding_sidecar(store, dir / "emb.f32");
  const auto from_sidecar = load_embeddings(dir / "emb.f32");
  EXPECT_EQ(from_sidecar, store);
  std::filesystem::remove_all(dir);
}

TEST(Embeddings, RejectsZeroNormAndDimMismatch) {
  EmbeddingStore s;
  EXPECT_THROW(s.add({"a", Space::Text, {0.0f, 0.0f}}), Error);
  s.add({"b", Space::Text, {1.0f, 0.0f}});
  EXPECT_THROW(s.add({"c", Space::Text, {1.0f, 0.0f, 0.0f}}), Error);
}
