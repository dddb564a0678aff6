// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "evidrank/error.hpp"
#include "evidrank/retrieval.hpp"

namespace evidrank {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v,
              const kernels::KernelTable& kernel) {
  if (u.size() != v.size()) {
    throw ContractError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                        std::to_string(v.size()) + ")");
  }
  const double uu = kernel.dot(u.data(), u.data(), u.size());
  const double vv = kernel.dot(v.data(), v.data(), v.size());
  if (uu == 0.0 || vv == 0.0) {
    throw ContractError("cosine: zero-norm vector");
  }
  const double uv = kernel.dot(u.data(), v.data(), u.size());
  return clamp_unit(uv / (std::sqrt(uu) * std::sqrt(vv)));
}

double cosine(std::span<const float> u, std::span<const float> v) {
  return cosine(u, v, kernels::active());
}

VectorIndex::VectorIndex(std::size_t dim, std::vector<std::string> ids, std::vector<float> rows)
    : dim_(dim), ids_(std::move(ids)), rows_(std::move(rows)) {
  if (rows_.size() != ids_.size() * dim_) {
    throw ContractError("VectorIndex: row data does not match ids x dim");
  }
  norms_.resize(ids_.size());
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < ids_.size(); ++r) {
    const float* p = rows_.data() + r * dim_;
    const double sq = k.dot(p, p, dim_);
    if (sq == 0.0) throw IntegrityError("zero-norm vector for \"" + ids_[r] + "\"");
    norms_[r] = std::sqrt(sq);
  }
}

std::vector<double> VectorIndex::scores(std::span<const float> query,
                                        const kernels::KernelTable& kernel) const {
  std::vector<double> out(ids_.size());
  if (ids_.empty()) return out;
  if (query.size() != dim_) {
    throw ContractError("query dimension " + std::to_string(query.size()) +
                        " does not match index dimension " + std::to_string(dim_));
  }
  const double qq = kernel.dot(query.data(), query.data(), dim_);
  if (qq == 0.0) throw ContractError("cosine: zero-norm query vector");
  const double qn = std::sqrt(qq);
  kernel.dot_rows(query.data(), rows_.data(), ids_.size(), dim_, out.data());
  for (std::size_t r = 0; r < out.size(); ++r) {
    // Same expression as cosine(): uv / (|u| |v|).
    out[r] = clamp_unit(out[r] / (qn * norms_[r]));
  }
  return out;
}

std::vector<ScoredRow> VectorIndex::top_n(std::span<const float> query, std::size_t n,
                                          const kernels::KernelTable& kernel) const {
  const auto all = scores(query, kernel);
  // `better(a, b)`: a ranks ahead of b.
  auto better = [this](const ScoredRow& a, const ScoredRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return ids_[a.row] < ids_[b.row];
  };

  const std::size_t keep = std::min(n, all.size());
  std::vector<ScoredRow> heap;
  heap.reserve(keep + 1);
  // Max-heap under `better` keeps the worst retained row on top.
  for (std::size_t r = 0; r < all.size() && keep > 0; ++r) {
    ScoredRow cand{r, all[r]};
    if (heap.size() < keep) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), better);
    } else if (better(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), better);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), better);
  return heap;
}

}  // namespace evidrank
