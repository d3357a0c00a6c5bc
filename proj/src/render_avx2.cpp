// AVX2 escape-time row kernel. Mirrors escape_row_scalar operation for
// operation: transcendentals go through scalar libm per lane and the
// vector arithmetic uses the same order with contraction disabled, so the
// iteration grids are bit-identical to the scalar kernel's.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "render_kernels.hpp"

namespace escaping::render::detail {

namespace {

__attribute__((target("avx2"))) inline __m256d lanewise(double (*f)(double), __m256d v) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, v);
    for (int i = 0; i < 4; ++i) buf[i] = f(buf[i]);
    return _mm256_load_pd(buf);
}

}  // namespace

__attribute__((target("avx2"))) void escape_row_avx2(const KernelParams& p, const double* zr0,
                                                     const double* zi0, int n, int* out_iters) {
    const __m256d K = _mm256_set1_pd(p.K);
    const __m256d Ar = _mm256_set1_pd(p.Ar);
    const __m256d Ai = _mm256_set1_pd(p.Ai);
    const __m256d esc2 = _mm256_set1_pd(p.esc2);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d neg = _mm256_set1_pd(-0.0);

    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d zr = _mm256_loadu_pd(zr0 + i);
        __m256d zi = _mm256_loadu_pd(zi0 + i);
        __m256i iters = _mm256_set1_epi64x(-1);
        __m256i active = _mm256_set1_epi64x(-1);
        for (int it = 1; it <= p.horizon; ++it) {
            const __m256d kzr = _mm256_mul_pd(K, zr);
            const __m256d kzi = _mm256_mul_pd(K, zi);
            __m256d wr, wi;
            if (p.family == 0) {
                const __m256d e = lanewise(+[](double x) { return std::exp(x); }, kzr);
                const __m256d s = lanewise(+[](double x) { return std::sin(x); }, kzi);
                const __m256d c = lanewise(+[](double x) { return std::cos(x); }, kzi);
                wr = _mm256_mul_pd(e, c);
                wi = _mm256_mul_pd(e, s);
            } else {
                const __m256d ep = lanewise(+[](double x) { return std::exp(x); }, kzr);
                const __m256d em = lanewise(+[](double x) { return std::exp(x); }, _mm256_xor_pd(kzr, neg));
                const __m256d s = lanewise(+[](double x) { return std::sin(x); }, kzi);
                const __m256d c = lanewise(+[](double x) { return std::cos(x); }, kzi);
                const __m256d ch = _mm256_mul_pd(half, _mm256_add_pd(ep, em));
                const __m256d sh = _mm256_mul_pd(half, _mm256_sub_pd(ep, em));
                wr = _mm256_mul_pd(ch, c);
                wi = _mm256_mul_pd(sh, s);
            }
            const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(Ar, wr), _mm256_mul_pd(Ai, wi));
            const __m256d ni = _mm256_add_pd(_mm256_mul_pd(Ar, wi), _mm256_mul_pd(Ai, wr));
            zr = nr;
            zi = ni;
            const __m256d n2 =
                _mm256_add_pd(_mm256_mul_pd(zr, zr), _mm256_mul_pd(zi, zi));
            // NLE_UQ is true for NaN, matching the scalar !(n2 <= esc2)
            const __m256i esc =
                _mm256_castpd_si256(_mm256_cmp_pd(n2, esc2, _CMP_NLE_UQ));
            const __m256i newly = _mm256_and_si256(esc, active);
            iters = _mm256_blendv_epi8(iters, _mm256_set1_epi64x(it), newly);
            active = _mm256_andnot_si256(esc, active);
            if (_mm256_testz_si256(active, active)) break;
        }
        alignas(32) long long out[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(out), iters);
        for (int k = 0; k < 4; ++k) out_iters[i + k] = static_cast<int>(out[k]);
    }
    if (i < n) escape_row_scalar(p, zr0 + i, zi0 + i, n - i, out_iters + i);
}

}  // namespace escaping::render::detail

#endif
