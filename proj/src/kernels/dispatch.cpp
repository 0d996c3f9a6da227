#include <cstdlib>
#include <cstring>

#include "subpois/kernels.hpp"

namespace subpois::kernels {

Isa detected_isa() {
#ifdef SUBPOIS_HAVE_AVX2_KERNELS
  static const Isa isa = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
#else
  return Isa::scalar;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* force = std::getenv("SUBPOIS_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "0") != 0 && force[0] != '\0') {
      return Isa::scalar;
    }
    return detected_isa();
  }();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) {
#ifdef SUBPOIS_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out) {
#ifdef SUBPOIS_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) {
    avx2::convolve_truncated(g, p, out);
    return;
  }
#endif
  scalar::convolve_truncated(g, p, out);
}

}  // namespace subpois::kernels
