// AVX2 variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// only reached after the runtime CPU check in kernels_dispatch.cpp.
#include "gazedist/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace gazedist::kernels {
namespace {

void conv1d_valid_avx2(const double* src, double* dst, std::size_t n,
                       const double* taps, std::size_t ntaps) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < ntaps; ++k) {
            const __m256d t = _mm256_set1_pd(taps[k]);
            const __m256d s = _mm256_loadu_pd(src + i + k);
            acc = _mm256_fmadd_pd(t, s, acc);
        }
        _mm256_storeu_pd(dst + i, acc);
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * src[i + k];
        dst[i] = acc;
    }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, vx, vy));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double max_avx2(const double* x, std::size_t n) {
    std::size_t i = 0;
    double m = x[0];
    if (n >= 4) {
        __m256d vm = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4)
            vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
        const __m128d lo = _mm256_castpd256_pd128(vm);
        const __m128d hi = _mm256_extractf128_pd(vm, 1);
        const __m128d s = _mm_max_pd(lo, hi);
        m = _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
    }
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sqdist_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{conv1d_valid_avx2, axpy_avx2, scale_avx2,
                         max_avx2, sum_avx2, sqdist_avx2};
    return &ops;
}

}  // namespace gazedist::kernels

#else

namespace gazedist::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace gazedist::kernels

#endif
