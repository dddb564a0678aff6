// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

#include "evidrank/kernels.hpp"

namespace evidrank::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::dot_rows};
#if defined(EVIDRANK_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::dot_rows};
#endif
#if defined(EVIDRANK_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, &neon::dot, &neon::dot_rows};
#endif

Isa resolve_active() {
  Isa best = Isa::Scalar;
  if (isa_supported(Isa::Avx2)) best = Isa::Avx2;
  if (isa_supported(Isa::Neon)) best = Isa::Neon;

  const char* env = std::getenv("EVIDRANK_SIMD");
  if (env == nullptr || *env == '\0') return best;
  const std::string want(env);
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (want == to_string(isa)) {
      if (isa_supported(isa)) return isa;
      spdlog::warn("kernels: EVIDRANK_SIMD={} not supported here, using {}", want, to_string(best));
      return best;
    }
  }
  spdlog::warn("kernels: unknown EVIDRANK_SIMD={}, using {}", want, to_string(best));
  return best;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(EVIDRANK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(EVIDRANK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(EVIDRANK_HAVE_AVX2)
    case Isa::Avx2: return kAvx2;
#endif
#if defined(EVIDRANK_HAVE_NEON)
    case Isa::Neon: return kNeon;
#endif
    default: return kScalar;
  }
}

Isa active_isa() {
  static const Isa isa = resolve_active();
  return isa;
}

const KernelTable& active() { return table(active_isa()); }

}  // namespace evidrank::kernels
