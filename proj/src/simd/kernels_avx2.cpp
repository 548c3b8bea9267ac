#include "robustspline/simd/kernels.hpp"

#if defined(ROBUSTSPLINE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>

// No FMA: each lane performs the same rounded operations as the scalar
// reference, so results are bit-identical.
#define RS_AVX2 __attribute__((target("avx2")))

namespace robustspline::simd::avx2 {

RS_AVX2 void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                                  std::span<const std::int32_t> segment, std::span<double> out)
{
    const std::size_t n = x.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(segment.data() + k));
        const __m256d base = _mm256_i32gather_pd(pc.base.data(), idx, 8);
        const __m256d c0 = _mm256_i32gather_pd(pc.c0.data(), idx, 8);
        const __m256d c1 = _mm256_i32gather_pd(pc.c1.data(), idx, 8);
        const __m256d c2 = _mm256_i32gather_pd(pc.c2.data(), idx, 8);
        const __m256d c3 = _mm256_i32gather_pd(pc.c3.data(), idx, 8);
        const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(x.data() + k), base);
        __m256d acc = _mm256_add_pd(c2, _mm256_mul_pd(t, c3));
        acc = _mm256_add_pd(c1, _mm256_mul_pd(t, acc));
        acc = _mm256_add_pd(c0, _mm256_mul_pd(t, acc));
        _mm256_storeu_pd(out.data() + k, acc);
    }
    if (k < n)
        scalar::eval_piecewise_cubic(pc, x.subspan(k), segment.subspan(k), out.subspan(k));
}

RS_AVX2 double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                                std::span<const double> b)
{
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + k), _mm256_mul_pd(d, d)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
    for (; k < n; ++k) {
        const double d = a[k] - b[k];
        total += w[k] * (d * d);
    }
    return total;
}

RS_AVX2 MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size();
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    __m256d best_idx = _mm256_set1_pd(0.0);
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_andnot_pd(
            sign_mask, _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k)));
        const __m256d gt = _mm256_cmp_pd(d, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, d, gt);
        best_idx = _mm256_blendv_pd(best_idx, idx, gt);
        idx = _mm256_add_pd(idx, four);
    }
    alignas(32) double v[4];
    alignas(32) double ix[4];
    _mm256_store_pd(v, best);
    _mm256_store_pd(ix, best_idx);

    MaxAbsResult r;
    for (int l = 0; l < 4; ++l) {
        const auto li = static_cast<std::size_t>(ix[l]);
        if (v[l] > r.value || (v[l] == r.value && v[l] > 0.0 && li < r.index)) {
            r.value = v[l];
            r.index = li;
        }
    }
    for (; k < n; ++k) {
        const double d = std::abs(a[k] - b[k]);
        if (d > r.value) {
            r.value = d;
            r.index = k;
        }
    }
    return r;
}

} // namespace robustspline::simd::avx2

#endif
