#include <cstdlib>
#include <string_view>

#include "thermo/simd/kernels.hpp"

namespace thermo::kern {

#if defined(THERMO_HAVE_AVX2)
const Kernels* avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(THERMO_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return avx2_kernels_impl();
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels* selected = []() -> const Kernels* {
    std::string_view mode = "auto";
    if (const char* env = std::getenv("THERMOLAB_SIMD")) mode = env;
    if (mode == "scalar") return &scalar_kernels();
    if (const Kernels* v = avx2_kernels(); v && (mode == "auto" || mode == "avx2")) return v;
    return &scalar_kernels();
  }();
  return *selected;
}

}  // namespace thermo::kern
