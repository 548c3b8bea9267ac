#include "robustspline/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace robustspline::simd {

namespace {

Isa detect()
{
    if (const char* env = std::getenv("ROBUSTSPLINE_SIMD"); env && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active()
{
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

bool cpu_has_avx2()
{
#if defined(ROBUSTSPLINE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa)
{
    if (isa == Isa::Avx2 && !cpu_has_avx2())
        isa = Isa::Scalar;
    active().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                          std::span<const std::int32_t> segment, std::span<double> out)
{
#if defined(ROBUSTSPLINE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2)
        return avx2::eval_piecewise_cubic(pc, x, segment, out);
#endif
    scalar::eval_piecewise_cubic(pc, x, segment, out);
}

double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b)
{
#if defined(ROBUSTSPLINE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2)
        return avx2::weighted_sq_diff(w, a, b);
#endif
    return scalar::weighted_sq_diff(w, a, b);
}

MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b)
{
#if defined(ROBUSTSPLINE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::Avx2)
        return avx2::max_abs_diff(a, b);
#endif
    return scalar::max_abs_diff(a, b);
}

} // namespace robustspline::simd
