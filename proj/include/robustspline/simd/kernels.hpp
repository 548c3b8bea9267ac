#pragma once

// Data-parallel inner loops used when a fitted spline is compared against a
// reference function on a dense grid. Each kernel has a portable scalar
// reference and an AVX2 variant; dispatch picks one at runtime.

#include <cstddef>
#include <cstdint>
#include <span>

namespace robustspline::simd {

/// Power-form piecewise cubic: on segment s, p(x) = c0 + t(c1 + t(c2 + t c3))
/// with t = x - base[s]. All arrays share the segment count.
struct PiecewiseCubicView {
    std::span<const double> base;
    std::span<const double> c0;
    std::span<const double> c1;
    std::span<const double> c2;
    std::span<const double> c3;
};

struct MaxAbsResult {
    double value = 0.0;
    std::size_t index = 0;
};

namespace scalar {
void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                          std::span<const std::int32_t> segment, std::span<double> out);
double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b);
MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ROBUSTSPLINE_HAVE_AVX2_KERNELS 1
namespace avx2 {
void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                          std::span<const std::int32_t> segment, std::span<double> out);
double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b);
MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b);
} // namespace avx2
#endif

enum class Isa { Scalar, Avx2 };

/// True if the running CPU can execute the AVX2 variants.
bool cpu_has_avx2();

/// The variant used by the dispatching entry points below. Defaults to the
/// best supported ISA; the environment variable ROBUSTSPLINE_SIMD=scalar
/// forces the reference path.
Isa active_isa();
void set_active_isa(Isa isa);
const char* isa_name(Isa isa);

void eval_piecewise_cubic(const PiecewiseCubicView& pc, std::span<const double> x,
                          std::span<const std::int32_t> segment, std::span<double> out);
double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b);
MaxAbsResult max_abs_diff(std::span<const double> a, std::span<const double> b);

} // namespace robustspline::simd
