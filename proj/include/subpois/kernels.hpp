#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64,
// an AVX2 variant; the dispatching entry points pick one at first use.

namespace subpois::kernels {

enum class Isa { scalar, avx2 };

/// Best instruction set supported by this CPU (cached).
Isa detected_isa();
/// Instruction set used by the dispatching kernels. SUBPOIS_FORCE_SCALAR=1
/// in the environment pins it to scalar.
Isa active_isa();
std::string_view isa_name(Isa isa);

/// sum_i a[i] * b[i]; spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

/// out[j] = sum_{i=0}^{min(j, g.size()-1)} g[i] * p[j - i] for j < out.size().
/// Requires p.size() >= out.size().
void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SUBPOIS_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void convolve_truncated(std::span<const double> g, std::span<const double> p,
                        std::span<double> out);
}  // namespace avx2
#endif

}  // namespace subpois::kernels
