#pragma once

#include "robustspline/design.hpp"
#include "robustspline/simd/kernels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace robustspline {

/// Smoothing parameter of the objective
///     (1/n) Σ (g(xᵢ) − yᵢ)² + λ ∫ (g″)².
/// The banded solver works with unscaled residuals, so it uses p = n·λ.
struct SmoothingParams {
    double lambda = 1.0;

    explicit SmoothingParams(double lam);

    double penalty_scale(std::size_t n) const { return static_cast<double>(n) * lambda; }
    /// λ > n⁻² is the regime the error bounds are stated for.
    bool in_recommended_range(std::size_t n) const;
};

/// Natural cubic spline with knots at the design points, represented by knot
/// values and knot second derivatives (γ₁ = γₙ = 0). Immutable.
class NaturalCubicSpline {
public:
    NaturalCubicSpline(DesignPoints knots, std::vector<double> values,
                       std::vector<double> second_derivs);

    const DesignPoints& knots() const { return knots_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> second_derivs() const { return gamma_; }
    std::size_t size() const { return values_.size(); }

    /// order 0, 1 or 2. Outside [x₁, xₙ] the spline continues linearly.
    double evaluate(double x, int order = 0) const;

    /// Evaluates at every point of a sorted (non-decreasing) range through the
    /// runtime-dispatched SIMD kernel.
    void evaluate_sorted(std::span<const double> x, std::span<double> out) const;

    /// ∫ (g″)² over the knot span (g″ vanishes outside).
    double roughness() const;

    /// Segment s covers: 0 → (−∞, x₁), s ∈ [1, n−1] → [x_s, x_{s+1}), n → [xₙ, ∞).
    std::size_t segment_of(double x) const;
    simd::PiecewiseCubicView power_form() const;

private:
    DesignPoints knots_;
    std::vector<double> values_;
    std::vector<double> gamma_;
    // power form per segment (n + 1 entries, see segment_of)
    std::vector<double> base_, c0_, c1_, c2_, c3_;
};

struct FitDiagnostics {
    double residual_mse = 0.0;
    double roughness = 0.0;
    double objective = 0.0;
};

/// Minimiser of the penalised least-squares objective over W²[a,b], computed
/// by the Reinsch banded system (R + p QᵀQ) γ = Qᵀy in O(n).
NaturalCubicSpline fit(const DesignPoints& design, std::span<const double> y,
                       const SmoothingParams& params);

double evaluate(const NaturalCubicSpline& spline, double x, int order = 0);
double roughness(const NaturalCubicSpline& spline);

FitDiagnostics diagnostics(const NaturalCubicSpline& spline, std::span<const double> y,
                           const SmoothingParams& params);

} // namespace robustspline
