// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "evidrank/embedding.hpp"
#include "evidrank/error.hpp"
#include "evidrank/jsonl.hpp"

namespace evidrank {

using nlohmann::json;

std::string_view to_string(Space space) noexcept {
  return space == Space::Text ? "text" : "crossmodal";
}

Space parse_space(std::string_view raw) {
  if (raw == "text") return Space::Text;
  if (raw == "crossmodal") return Space::CrossModal;
  throw MappingError("unknown embedding space \"" + std::string(raw) + "\"");
}

void EmbeddingStore::add(EmbeddingRecord record) {
  auto& t = table(record.space);
  const auto& v = record.vector;
  if (v.empty()) {
    throw IntegrityError("embedding \"" + record.id + "\" is empty");
  }
  if (t.dim == 0) {
    t.dim = v.size();
  } else if (v.size() != t.dim) {
    throw IntegrityError("embedding \"" + record.id + "\" has dimension " +
                         std::to_string(v.size()) + ", space " +
                         std::string(to_string(record.space)) + " expects " +
                         std::to_string(t.dim));
  }
  double sq = 0.0;
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw IntegrityError("embedding \"" + record.id + "\" has a non-finite entry");
    }
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (sq == 0.0) {
    throw IntegrityError("embedding \"" + record.id + "\" has zero norm");
  }
  if (!t.rows.emplace(record.id, t.ids.size()).second) {
    throw IntegrityError("duplicate embedding id \"" + record.id + "\" in space " +
                         std::string(to_string(record.space)));
  }
  t.ids.push_back(std::move(record.id));
  t.data.insert(t.data.end(), v.begin(), v.end());
}

std::span<const float> EmbeddingStore::find(Space space, std::string_view id) const {
  const auto& t = table(space);
  auto it = t.rows.find(std::string(id));
  if (it == t.rows.end()) return {};
  return {t.data.data() + it->second * t.dim, t.dim};
}

std::vector<EmbeddingRecord> EmbeddingStore::records() const {
  std::vector<EmbeddingRecord> out;
  out.reserve(size());
  for (Space s : {Space::Text, Space::CrossModal}) {
    const auto& t = table(s);
    for (std::size_t r = 0; r < t.ids.size(); ++r) {
      const float* row = t.data.data() + r * t.dim;
      out.push_back({t.ids[r], s, std::vector<float>(row, row + t.dim)});
    }
  }
  return out;
}

bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
  auto same = [](const EmbeddingStore::Table& x, const EmbeddingStore::Table& y) {
    if (x.dim != y.dim || x.ids != y.ids || x.data.size() != y.data.size()) return false;
    // Bitwise: the two loaders must agree exactly, including on signed zeros.
    return x.data.empty() ||
           std::memcmp(x.data.data(), y.data.data(), x.data.size() * sizeof(float)) == 0;
  };
  return same(a.text_, b.text_) && same(a.cross_, b.cross_);
}

EmbeddingStore parse_embeddings_jsonl(std::string_view text, const std::string& source) {
  EmbeddingStore store;
  for_each_jsonl(text, source, [&](const json& rec, std::size_t line) {
    EmbeddingRecord r;
    r.id = require_string(rec, "id", source, line);
    try {
      r.space = parse_space(require_string(rec, "space", source, line));
    } catch (const MappingError& e) {
      throw ParseError(source, line, e.what());
    }
    auto it = rec.find("vector");
    if (it == rec.end() || !it->is_array()) {
      throw ParseError(source, line, "missing or non-array field \"vector\"");
    }
    r.vector.reserve(it->size());
    for (const auto& x : *it) {
      if (!x.is_number()) throw ParseError(source, line, "non-numeric vector entry");
      r.vector.push_back(static_cast<float>(x.get<double>()));
    }
    try {
      store.add(std::move(r));
    } catch (const IntegrityError& e) {
      throw IntegrityError(source + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return store;
}

std::string serialize_embeddings_jsonl(const EmbeddingStore& store) {
  std::string out;
  for (const auto& r : store.records()) {
    json rec = {{"id", r.id}, {"space", std::string(to_string(r.space))}};
    json vec = json::array();
    for (float x : r.vector) vec.push_back(static_cast<double>(x));
    rec["vector"] = std::move(vec);
    out += dump_line(rec);
    out += '\n';
  }
  return out;
}

namespace {

std::filesystem::path manifest_path(const std::filesystem::path& f32_path) {
  auto p = f32_path;
  p.replace_extension(".ids.jsonl");
  return p;
}

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return __builtin_bswap32(v);
  }
  return v;
}

}  // namespace

void write_embedding_sidecar(const EmbeddingStore& store, const std::filesystem::path& f32_path) {
  std::string manifest;
  std::string blob;
  for (const auto& r : store.records()) {
    manifest += dump_line({{"id", r.id},
                           {"space", std::string(to_string(r.space))},
                           {"dim", r.vector.size()}});
    manifest += '\n';
    for (float x : r.vector) {
      const std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(x));
      char buf[4];
      std::memcpy(buf, &bits, 4);
      blob.append(buf, 4);
    }
  }
  write_file(f32_path, blob);
  write_file(manifest_path(f32_path), manifest);
}

EmbeddingStore load_embedding_sidecar(const std::filesystem::path& f32_path) {
  const auto mpath = manifest_path(f32_path);
  const std::string blob = read_file(f32_path);
  const std::string manifest = read_file(mpath);
  const std::string source = mpath.string();

  EmbeddingStore store;
  std::size_t offset = 0;
  for_each_jsonl(manifest, source, [&](const json& rec, std::size_t line) {
    EmbeddingRecord r;
    r.id = require_string(rec, "id", source, line);
    try {
      r.space = parse_space(require_string(rec, "space", source, line));
    } catch (const MappingError& e) {
      throw ParseError(source, line, e.what());
    }
    auto it = rec.find("dim");
    if (it == rec.end() || !it->is_number_unsigned()) {
      throw ParseError(source, line, "missing or invalid field \"dim\"");
    }
    const auto dim = it->get<std::size_t>();
    if (offset + dim * 4 > blob.size()) {
      throw ParseError(source, line, "binary sidecar is shorter than the manifest");
    }
    r.vector.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      std::uint32_t bits;
      std::memcpy(&bits, blob.data() + offset + k * 4, 4);
      r.vector[k] = std::bit_cast<float>(to_le(bits));
    }
    offset += dim * 4;
    store.add(std::move(r));
  });
  if (offset != blob.size()) {
    throw IntegrityError(f32_path.string() + ": trailing bytes after the last manifest row");
  }
  return store;
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  if (path.extension() == ".f32") return load_embedding_sidecar(path);
  return parse_embeddings_jsonl(read_file(path), path.string());
}

}  // namespace evidrank
