// SPDX-License-Identifier: Apache-2.0
// AVX2 variant: 8 floats per step, widened into two 4-wide double accumulators
// that hold lanes 0..3 and 4..7. Compiled with -mavx2 only; callers reach it
// through the dispatch table after a CPUID check.

#include <immintrin.h>

#include "evidrank/kernels.hpp"

namespace evidrank::kernels::avx2 {

double dot(const float* a, const float* b, std::size_t n) noexcept {
  __m256d acc_lo = _mm256_setzero_pd();
  __m256d acc_hi = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 va = _mm256_loadu_ps(a + i);
    const __m256 vb = _mm256_loadu_ps(b + i);
    const __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
    const __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
    const __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
    const __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
    acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(a_lo, b_lo));
    acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(a_hi, b_hi));
  }

  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc_lo);
  _mm256_store_pd(lanes + 4, acc_hi);
  for (std::size_t j = 0; i + j < n; ++j) {
    lanes[j] += static_cast<double>(a[i + j]) * static_cast<double>(b[i + j]);
  }
  return reduce_lanes(lanes);
}

void dot_rows(const float* query, const float* rows, std::size_t n_rows, std::size_t dim,
              double* out) noexcept {
  for (std::size_t r = 0; r < n_rows; ++r) {
    out[r] = dot(query, rows + r * dim, dim);
  }
}

}  // namespace evidrank::kernels::avx2
