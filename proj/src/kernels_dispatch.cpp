#include <cstdlib>
#include <cstring>

#include "simplexq/kernels.hpp"

namespace simplexq::kernels {

#if !defined(SIMPLEXQ_HAVE_AVX2_LANE)
const Ops* avx2_ops() { return nullptr; }
#endif

namespace {

const Ops* select() {
  if (const char* env = std::getenv("SIMPLEXQ_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops() != nullptr) {
      return avx2_ops();
    }
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  // Selected once; every later call sees the same lane, which keeps a
  // process's outputs self-consistent.
  static const Ops* chosen = select();
  return *chosen;
}

}  // namespace simplexq::kernels
