// SPDX-License-Identifier: Apache-2.0
// AArch64 NEON variant: four float64x2 accumulators cover lanes 0..7.

#include <arm_neon.h>

#include "evidrank/kernels.hpp"

namespace evidrank::kernels::neon {

double dot(const float* a, const float* b, std::size_t n) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  float64x2_t acc2 = vdupq_n_f64(0.0);
  float64x2_t acc3 = vdupq_n_f64(0.0);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float32x4_t a0 = vld1q_f32(a + i);
    const float32x4_t a1 = vld1q_f32(a + i + 4);
    const float32x4_t b0 = vld1q_f32(b + i);
    const float32x4_t b1 = vld1q_f32(b + i + 4);
    // Separate multiply and add; the product is exact so fusing would not matter either.
    acc0 = vaddq_f64(acc0, vmulq_f64(vcvt_f64_f32(vget_low_f32(a0)), vcvt_f64_f32(vget_low_f32(b0))));
    acc1 = vaddq_f64(acc1, vmulq_f64(vcvt_high_f64_f32(a0), vcvt_high_f64_f32(b0)));
    acc2 = vaddq_f64(acc2, vmulq_f64(vcvt_f64_f32(vget_low_f32(a1)), vcvt_f64_f32(vget_low_f32(b1))));
    acc3 = vaddq_f64(acc3, vmulq_f64(vcvt_high_f64_f32(a1), vcvt_high_f64_f32(b1)));
  }

  double lanes[kLanes];
  vst1q_f64(lanes, acc0);
  vst1q_f64(lanes + 2, acc1);
  vst1q_f64(lanes + 4, acc2);
  vst1q_f64(lanes + 6, acc3);
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

}  // namespace evidrank::kernels::neon
