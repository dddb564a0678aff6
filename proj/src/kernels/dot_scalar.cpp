// SPDX-License-Identifier: Apache-2.0
#include "evidrank/kernels.hpp"

namespace evidrank::kernels::scalar {

double dot(const float* a, const float* b, std::size_t n) noexcept {
  double lanes[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) {
    lanes[i % kLanes] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return reduce_lanes(lanes);
}

void dot_rows(const float* query, const float* rows, std::size_t n_rows, std::size_t dim,
              double* out) noexcept {
  for (std::size_t r = 0; r < n_rows; ++r) {
    out[r] = dot(query, rows + r * dim, dim);
  }
}

}  // namespace evidrank::kernels::scalar
