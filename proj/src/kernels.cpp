#include "gspec/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace gspec::kern {

#if defined(__x86_64__)
bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

namespace {

const Ops* select_backend() {
  const char* env = std::getenv("GSPEC_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
#if defined(__x86_64__)
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return &avx2_ops();
#endif
  }
#if defined(__x86_64__)
  if (avx2_supported()) return &avx2_ops();
#endif
  return &scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops* selected = select_backend();
  return *selected;
}

std::string_view active_backend() { return ops().name; }

}  // namespace gspec::kern
