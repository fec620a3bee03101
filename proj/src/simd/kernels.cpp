#include "trendlab/simd/kernels.hpp"

namespace trendlab::simd {

namespace {

using ReduceFn = double (*)(const double*, std::size_t);
using Dot2Fn = double (*)(const double*, const double*, std::size_t);

struct Dispatch {
    Backend backend;
    ReduceFn sum;
    Dot2Fn dot;
    ReduceFn sumsq;
};

Dispatch make_dispatch(Backend b) {
#if defined(TRENDLAB_HAVE_AVX2)
    if (b == Backend::avx2) {
        return {Backend::avx2, detail::sum_avx2, detail::dot_avx2, detail::sumsq_avx2};
    }
#endif
    return {Backend::scalar, detail::sum_scalar, detail::dot_scalar, detail::sumsq_scalar};
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(detail::avx2_available() ? Backend::avx2
                                                               : Backend::scalar);
    return d;
}

}  // namespace

namespace detail {

bool avx2_available() {
#if defined(TRENDLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace detail

Backend active_backend() { return dispatch().backend; }

bool set_backend(Backend backend) {
    if (backend == Backend::avx2 && !detail::avx2_available()) return false;
    dispatch() = make_dispatch(backend);
    return true;
}

std::string_view backend_name() {
    switch (dispatch().backend) {
        case Backend::avx2: return "avx2";
        case Backend::scalar: break;
    }
    return "scalar";
}

double sum(std::span<const double> x) { return dispatch().sum(x.data(), x.size()); }

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    return dispatch().dot(a.data(), b.data(), n);
}

double sumsq(std::span<const double> x) { return dispatch().sumsq(x.data(), x.size()); }

}  // namespace trendlab::simd
