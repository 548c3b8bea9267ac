#pragma once

#include "robustspline/density.hpp"
#include "robustspline/design.hpp"
#include "robustspline/spline.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace robustspline {

/// Hat matrix S of the smoothing spline: fitted knot values = S·y.
class SmootherMatrix {
public:
    SmootherMatrix(DesignPoints design, double lambda, std::vector<double> entries);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }
    double lambda() const { return lambda_; }
    const DesignPoints& design() const { return design_; }

    std::vector<double> apply(std::span<const double> y) const;

private:
    DesignPoints design_;
    double lambda_;
    std::size_t n_;
    std::vector<double> entries_; // row-major
};

/// Column j is the fit to the unit response e_j. O(n²); columns may be
/// computed on several threads.
SmootherMatrix hat_matrix(const DesignPoints& design, const SmoothingParams& params,
                          unsigned threads = 1);

/// Spline fitted to the unit response e_j (0-based j).
NaturalCubicSpline unit_response(const DesignPoints& design, const SmoothingParams& params,
                                 std::size_t j);

/// W_n(x, x_j) = n·ℓ_j(x), so that f̂(x) = (1/n) Σ_j W_n(x, x_j) y_j. j is 0-based.
double weight_function(const DesignPoints& design, const SmoothingParams& params, double x,
                       std::size_t j);

/// F_n(x) = (1/n) #{i : x_i ≤ x}.
class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> sorted_points);
    explicit EmpiricalCDF(const DesignPoints& design);

    double operator()(double x) const;
    std::span<const double> points() const { return x_; }

private:
    std::vector<double> x_;
};

/// φ₀(x, s) = 2^{-1/2} ∫_{min}^{max} p(t)^{1/4} dt by adaptive Simpson (abs tol 1e-10).
double phase_function(const DensityModel& density, double x, double s);

/// Closed-form equivalent kernel
///     Ŵ(x,s) = (λ^{-1/4}/2) (p(s)p(x))^{-3/8} exp(-λ^{-1/4}φ₀) sin(λ^{-1/4}φ₀ + π/4).
double equivalent_kernel(const DensityModel& density, const SmoothingParams& params, double x,
                         double s);

/// (λ^{-1/4}/2) p_min^{-3/4}, the uniform bound on |Ŵ|.
double equivalent_kernel_bound(const DensityModel& density, const SmoothingParams& params);

struct KernelGridRow {
    double x = 0.0;
    double s = 0.0;
    std::size_t j = 0;
    double weight = 0.0;
    double kernel = 0.0;
    double abs_diff = 0.0;
};

struct KernelApproxResult {
    double sup_abs_error = 0.0;
    double sup_abs_kernel = 0.0;
    double relative_error = 0.0;
    std::size_t columns = 0;
    std::size_t x_points = 0;
    std::vector<std::string> warnings;
};

struct KernelGrid {
    std::vector<KernelGridRow> rows;
    KernelApproxResult summary;
};

/// Compares W_n with Ŵ_n on grid_size evaluation points spanning the domain and
/// up to grid_size design columns x_j with x_j in the interior [τ₁, τ₂].
KernelGrid kernel_grid(const DesignPoints& design, const SmoothingParams& params,
                       const DensityModel& density, Interval interior, std::size_t grid_size,
                       unsigned threads = 1);

KernelApproxResult kernel_approx_error(const DesignPoints& design, const SmoothingParams& params,
                                       const DensityModel& density, Interval interior,
                                       std::size_t grid_size, unsigned threads = 1);

/// Default interior [a + (b−a)/4, a + 3(b−a)/4].
Interval default_interior(const Interval& domain);

/// sup_x |F_n(x) − F(x)|, exact over the jump points. Points must be sorted.
double cdf_discrepancy(std::span<const double> sorted_points, const DensityModel& density);
double cdf_discrepancy(const DesignPoints& design, const DensityModel& density);

} // namespace robustspline
