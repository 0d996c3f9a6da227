// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cstddef>
#include <vector>

#include "subpois/kernels.hpp"

namespace subpois::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_ptr(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  return dot_ptr(a.data(), b.data(), a.size());
}

void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out) {
  if (out.empty()) return;
  // Reverse the kernel once so every output is a contiguous dot product.
  const std::size_t len = out.size();
  std::vector<double> rev(len);
  for (std::size_t m = 0; m < len; ++m) rev[m] = p[len - 1 - m];
  for (std::size_t j = 0; j < len; ++j) {
    const std::size_t terms = std::min(j + 1, g.size());
    out[j] = dot_ptr(g.data(), rev.data() + (len - 1 - j), terms);
  }
}

}  // namespace subpois::kernels::avx2
