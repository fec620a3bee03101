#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Vector reduction kernels used by the statistics and feature-extraction
// hot loops. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2 variant; the active variant is chosen once at runtime
// from CPU capabilities. SIMD accumulation reorders additions, so results
// may differ from the scalar path by normal floating-point reassociation
// error; the equivalence tests bound that difference.

namespace trendlab::simd {

enum class Backend { scalar, avx2 };

/// Backend currently used by sum/dot/sumsq.
Backend active_backend();

/// Force a backend (used by tests). Returns false if the requested
/// backend is not available on this CPU/build.
bool set_backend(Backend backend);

std::string_view backend_name();

/// Sum of all elements. Empty input yields 0.
double sum(std::span<const double> x);

/// Inner product a.b over min(|a|,|b|) elements.
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of squares.
double sumsq(std::span<const double> x);

namespace detail {

double sum_scalar(const double* x, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
double sumsq_scalar(const double* x, std::size_t n);

#if defined(TRENDLAB_HAVE_AVX2)
double sum_avx2(const double* x, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
double sumsq_avx2(const double* x, std::size_t n);
#endif

bool avx2_available();

}  // namespace detail

}  // namespace trendlab::simd
