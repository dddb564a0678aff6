// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evidrank {

/// Text space holds claim and sentence vectors from the text encoder; the
/// cross-modal space holds claim text vectors and image vectors of a CLIP-style model.
enum class Space { Text, CrossModal };

std::string_view to_string(Space space) noexcept;
Space parse_space(std::string_view raw);

struct EmbeddingRecord {
  std::string id;
  Space space = Space::Text;
  std::vector<float> vector;
};

/// Precomputed vectors keyed by (space, id). Every space has a single
/// dimensionality; every vector is finite with nonzero norm.
class EmbeddingStore {
 public:
  void add(EmbeddingRecord record);

  /// Empty span when absent.
  std::span<const float> find(Space space, std::string_view id) const;
  bool contains(Space space, std::string_view id) const { return !find(space, id).empty(); }

  /// 0 when the space is empty.
  std::size_t dim(Space space) const noexcept { return table(space).dim; }
  std::size_t size(Space space) const noexcept { return table(space).ids.size(); }
  std::size_t size() const noexcept { return size(Space::Text) + size(Space::CrossModal); }

  /// All records in insertion order (text space first).
  std::vector<EmbeddingRecord> records() const;

  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b);

 private:
  struct Table {
    std::size_t dim = 0;
    std::vector<std::string> ids;
    std::vector<float> data;
    std::unordered_map<std::string, std::size_t> rows;
  };

  const Table& table(Space s) const noexcept { return s == Space::Text ? text_ : cross_; }
  Table& table(Space s) noexcept { return s == Space::Text ? text_ : cross_; }

  Table text_;
  Table cross_;
};

/// Line-delimited {"id","space","vector":[...]}.
EmbeddingStore parse_embeddings_jsonl(std::string_view text, const std::string& source = "<memory>");
std::string serialize_embeddings_jsonl(const EmbeddingStore& store);

/// Binary sidecar: `<stem>.f32` holds little-endian float32 rows back to back;
/// `<stem>.ids.jsonl` lists {"id","space","dim"} per row in the same order.
void write_embedding_sidecar(const EmbeddingStore& store, const std::filesystem::path& f32_path);
EmbeddingStore load_embedding_sidecar(const std::filesystem::path& f32_path);

/// Dispatches on extension: `.f32` reads the sidecar pair, anything else the JSONL form.
EmbeddingStore load_embeddings(const std::filesystem::path& path);

}  // namespace evidrank
