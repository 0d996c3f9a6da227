#include <algorithm>
#include <cstddef>
#include <vector>

#include "subpois/kernels.hpp"

namespace subpois::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::size_t last = std::min(j + 1, g.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < last; ++i) acc += g[i] * p[j - i];
    out[j] = acc;
  }
}

}  // namespace subpois::kernels::scalar
