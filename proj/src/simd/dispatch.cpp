#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sgfem/simd/kernels.hpp"

namespace sgfem::simd {

#ifndef SGFEM_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(SGFEM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* pick_default() {
  std::string mode = "auto";
  if (const char* env = std::getenv("SGFEM_SIMD")) mode = env;
  if (mode == "scalar") return &scalar_kernels();
  if (cpu_supports(Isa::Avx2)) return avx2_kernels();
  if (mode == "avx2") throw std::runtime_error("SGFEM_SIMD=avx2 requested but not supported");
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!cpu_supports(isa)) throw std::invalid_argument("requested kernel variant is unavailable");
  current().store(isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels());
}

}  // namespace sgfem::simd
