#include "repnet/kernels.hpp"

#include <atomic>

namespace repnet::kern {

#if defined(REPNET_HAVE_AVX2)
const Ops* avx2_ops_table();
#endif

const Ops* avx2_ops() {
#if defined(REPNET_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_ops_table();
#endif
  return nullptr;
}

namespace {
std::atomic<bool> g_force_scalar{false};
}

void force_scalar(bool on) { g_force_scalar.store(on); }

const Ops& ops() {
  if (g_force_scalar.load()) return scalar_ops();
  static const Ops* best = avx2_ops() ? avx2_ops() : &scalar_ops();
  return *best;
}

}  // namespace repnet::kern
