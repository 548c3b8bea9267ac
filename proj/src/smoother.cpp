#include "robustspline/smoother.hpp"

#include "robustspline/error.hpp"
#include "robustspline/parallel.hpp"
#include "robustspline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace robustspline {

SmootherMatrix::SmootherMatrix(DesignPoints design, double lambda, std::vector<double> entries)
    : design_(std::move(design)), lambda_(lambda), n_(design_.size()), entries_(std::move(entries))
{
    if (entries_.size() != n_ * n_)
        throw InputError("smoother matrix entries must be n×n");
}

std::vector<double> SmootherMatrix::apply(std::span<const double> y) const
{
    if (y.size() != n_)
        throw InputError("vector length does not match smoother size");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            acc += entries_[i * n_ + j] * y[j];
        out[i] = acc;
    }
    return out;
}

NaturalCubicSpline unit_response(const DesignPoints& design, const SmoothingParams& params,
                                 std::size_t j)
{
    if (j >= design.size())
        throw InputError("weight index " + std::to_string(j) + " out of range for n = " +
                         std::to_string(design.size()));
    std::vector<double> e(design.size(), 0.0);
    e[j] = 1.0;
    return fit(design, e, params);
}

SmootherMatrix hat_matrix(const DesignPoints& design, const SmoothingParams& params,
                          unsigned threads)
{
    const std::size_t n = design.size();
    std::vector<double> entries(n * n);
    parallel_for(n, threads, [&](std::size_t j) {
        const auto col = unit_response(design, params, j);
        const auto v = col.values();
        for (std::size_t i = 0; i < n; ++i)
            entries[i * n + j] = v[i];
    });
    return SmootherMatrix(design, params.lambda, std::move(entries));
}

double weight_function(const DesignPoints& design, const SmoothingParams& params, double x,
                       std::size_t j)
{
    return static_cast<double>(design.size()) * unit_response(design, params, j).evaluate(x);
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> sorted_points) : x_(std::move(sorted_points))
{
    if (x_.empty())
        throw InputError("empirical CDF needs at least one point");
    if (!std::is_sorted(x_.begin(), x_.end()))
        throw InputError("empirical CDF points must be sorted");
}

EmpiricalCDF::EmpiricalCDF(const DesignPoints& design)
    : EmpiricalCDF(std::vector<double>(design.points().begin(), design.points().end()))
{
}

double EmpiricalCDF::operator()(double x) const
{
    const auto count = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    return static_cast<double>(count) / static_cast<double>(x_.size());
}

namespace {

double checked_pdf(const DensityModel& density, double x)
{
    const double p = density.pdf(x);
    if (!(p > 0.0) || !std::isfinite(p))
        throw DensityError("density is not positive at x = " + std::to_string(x));
    return p;
}

} // namespace

double phase_function(const DensityModel& density, double x, double s)
{
    const double lo = std::min(x, s);
    const double hi = std::max(x, s);
    if (lo == hi)
        return 0.0;
    const auto q = adaptive_simpson(
        [&](double t) { return std::pow(checked_pdf(density, t), 0.25); }, lo, hi, 1e-10, 40);
    return q.value / std::numbers::sqrt2;
}

double equivalent_kernel(const DensityModel& density, const SmoothingParams& params, double x,
                         double s)
{
    const double px = checked_pdf(density, x);
    const double ps = checked_pdf(density, s);
    const double scale = std::pow(params.lambda, -0.25);
    const double arg = scale * phase_function(density, x, s);
    return 0.5 * scale * std::pow(ps * px, -0.375) * std::exp(-arg) *
           std::sin(arg + 0.25 * std::numbers::pi);
}

double equivalent_kernel_bound(const DensityModel& density, const SmoothingParams& params)
{
    return 0.5 * std::pow(params.lambda, -0.25) * std::pow(density.p_min(), -0.75);
}

Interval default_interior(const Interval& domain)
{
    return {domain.lo + 0.25 * domain.length(), domain.lo + 0.75 * domain.length()};
}

KernelGrid kernel_grid(const DesignPoints& design, const SmoothingParams& params,
                       const DensityModel& density, Interval interior, std::size_t grid_size,
                       unsigned threads)
{
    const Interval& dom = design.domain();
    if (!(dom.lo < interior.lo && interior.lo < interior.hi && interior.hi < dom.hi))
        throw InputError("kernel interior must satisfy a < tau1 < tau2 < b");
    if (grid_size < 2)
        throw InputError("kernel grid needs at least 2 points");

    KernelGrid out;
    if (params.lambda >= 1.0)
        out.summary.warnings.push_back(
            "lambda >= 1: outside the small-lambda regime where the equivalent kernel applies");

    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < design.size(); ++j)
        if (interior.contains(design[j]))
            inside.push_back(j);
    if (inside.empty())
        throw InputError("no design points inside the kernel interior");

    std::vector<std::size_t> cols;
    if (inside.size() <= grid_size) {
        cols = inside;
    } else {
        for (std::size_t k = 0; k < grid_size; ++k) {
            const double pos = static_cast<double>(k) * static_cast<double>(inside.size() - 1) /
                               static_cast<double>(grid_size - 1);
            cols.push_back(inside[static_cast<std::size_t>(std::llround(pos))]);
        }
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }

    std::vector<double> xs(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k)
        xs[k] = dom.lo + dom.length() * static_cast<double>(k) / static_cast<double>(grid_size - 1);

    const double n = static_cast<double>(design.size());
    out.rows.resize(cols.size() * grid_size);
    parallel_for(cols.size(), threads, [&](std::size_t c) {
        const std::size_t j = cols[c];
        const auto spline = unit_response(design, params, j);
        std::vector<double> w(grid_size);
        spline.evaluate_sorted(xs, w);
        for (std::size_t k = 0; k < grid_size; ++k) {
            KernelGridRow& r = out.rows[c * grid_size + k];
            r.x = xs[k];
            r.s = design[j];
            r.j = j;
            r.weight = n * w[k];
            r.kernel = equivalent_kernel(density, params, xs[k], design[j]);
            r.abs_diff = std::abs(r.weight - r.kernel);
        }
    });

    for (const auto& r : out.rows) {
        out.summary.sup_abs_error = std::max(out.summary.sup_abs_error, r.abs_diff);
        out.summary.sup_abs_kernel = std::max(out.summary.sup_abs_kernel, std::abs(r.kernel));
    }
    out.summary.relative_error = out.summary.sup_abs_kernel > 0.0
                                     ? out.summary.sup_abs_error / out.summary.sup_abs_kernel
                                     : 0.0;
    out.summary.columns = cols.size();
    out.summary.x_points = grid_size;
    return out;
}

KernelApproxResult kernel_approx_error(const DesignPoints& design, const SmoothingParams& params,
                                       const DensityModel& density, Interval interior,
                                       std::size_t grid_size, unsigned threads)
{
    return kernel_grid(design, params, density, interior, grid_size, threads).summary;
}

double cdf_discrepancy(std::span<const double> x, const DensityModel& density)
{
    if (!std::is_sorted(x.begin(), x.end()))
        throw InputError("cdf_discrepancy needs sorted points");
    const double n = static_cast<double>(x.size());
    double sup = 0.0;
    // F_n jumps at each distinct point; compare F with the left and right limits.
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t k = i;
        while (k + 1 < x.size() && x[k + 1] == x[i])
            ++k;
        const double f = density.cdf(x[i]);
        sup = std::max(sup, std::abs(static_cast<double>(i) / n - f));
        sup = std::max(sup, std::abs(static_cast<double>(k + 1) / n - f));
        i = k + 1;
    }
    return sup;
}

double cdf_discrepancy(const DesignPoints& design, const DensityModel& density)
{
    return cdf_discrepancy(design.points(), density);
}

} // namespace robustspline
