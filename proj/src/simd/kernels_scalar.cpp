#include "robustspline/simd/kernels.hpp"

#include <cmath>

namespace robustspline::simd::scalar {

void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                          std::span<const std::int32_t> segment, std::span<double> out)
{
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto s = static_cast<std::size_t>(segment[k]);
        const double t = x[k] - pc.base[s];
        out[k] = pc.c0[s] + t * (pc.c1[s] + t * (pc.c2[s] + t * pc.c3[s]));
    }
}

double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b)
{
    // Four interleaved partial sums, combined pairwise at the end, so the
    // result is bit-identical to the AVX2 lane layout.
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = a.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const double d = a[k + l] - b[k + l];
            acc[l] += w[k + l] * (d * d);
        }
    }
    double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (; k < n; ++k) {
        const double d = a[k] - b[k];
        total += w[k] * (d * d);
    }
    return total;
}

MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    MaxAbsResult r;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a[k] - b[k]);
        if (d > r.value) {
            r.value = d;
            r.index = k;
        }
    }
    return r;
}

} // namespace robustspline::simd::scalar
