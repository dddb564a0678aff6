// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dot-product kernels behind the cosine retriever.
//
// Every variant accumulates in double precision over eight interleaved lanes
// (element i feeds lane i % 8) and folds the lanes with the same fixed tree.
// A product of two floats is exact in double, so each lane sees the same
// sequence of correctly rounded additions on every ISA: the scalar reference
// and the SIMD variants agree bit for bit, and FMA contraction cannot change
// the result.

#include <cstddef>
#include <span>
#include <string_view>

namespace evidrank::kernels {

inline constexpr std::size_t kLanes = 8;

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

using DotFn = double (*)(const float* a, const float* b, std::size_t n) noexcept;
using DotRowsFn = void (*)(const float* query, const float* rows, std::size_t n_rows,
                           std::size_t dim, double* out) noexcept;

struct KernelTable {
  Isa isa;
  DotFn dot;
  DotRowsFn dot_rows;
};

bool isa_supported(Isa isa) noexcept;
/// Throws std::invalid_argument when the ISA is not compiled in or not supported by the CPU.
const KernelTable& table(Isa isa);

/// Best supported ISA, unless EVIDRANK_SIMD=scalar|avx2|neon overrides it.
Isa active_isa();
const KernelTable& active();

/// Fixed lane fold shared by every variant.
inline double reduce_lanes(const double* lanes) noexcept {
  return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
         ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
}

namespace scalar {
double dot(const float* a, const float* b, std::size_t n) noexcept;
void dot_rows(const float* query, const float* rows, std::size_t n_rows, std::size_t dim,
              double* out) noexcept;
}  // namespace scalar

#if defined(EVIDRANK_HAVE_AVX2)
namespace avx2 {
double dot(const float* a, const float* b, std::size_t n) noexcept;
void dot_rows(const float* query, const float* rows, std::size_t n_rows, std::size_t dim,
              double* out) noexcept;
}  // namespace avx2
#endif

#if defined(EVIDRANK_HAVE_NEON)
namespace neon {
double dot(const float* a, const float* b, std::size_t n) noexcept;
void dot_rows(const float* query, const float* rows, std::size_t n_rows, std::size_t dim,
              double* out) noexcept;
}  // namespace neon
#endif

inline double dot(std::span<const float> a, std::span<const float> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

}  // namespace evidrank::kernels
