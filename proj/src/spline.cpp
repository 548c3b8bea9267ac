#include "robustspline/spline.hpp"

#include "robustspline/banded.hpp"
#include "robustspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace robustspline {

SmoothingParams::SmoothingParams(double lam) : lambda(lam)
{
    if (!(lam > 0.0) || !std::isfinite(lam))
        throw InputError("smoothing parameter lambda must be positive and finite");
}

bool SmoothingParams::in_recommended_range(std::size_t n) const
{
    const double nn = static_cast<double>(n);
    return lambda > 1.0 / (nn * nn);
}

NaturalCubicSpline::NaturalCubicSpline(DesignPoints knots, std::vector<double> values,
                                       std::vector<double> second_derivs)
    : knots_(std::move(knots)), values_(std::move(values)), gamma_(std::move(second_derivs))
{
    const std::size_t n = knots_.size();
    if (values_.size() != n || gamma_.size() != n)
        throw InputError("spline values and second derivatives must match the knot count");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(values_[i]) || !std::isfinite(gamma_[i]))
            throw NumericalError("spline coefficient " + std::to_string(i) + " is not finite");
    if (gamma_.front() != 0.0 || gamma_.back() != 0.0)
        throw InputError("natural spline requires zero second derivative at the end knots");

    base_.resize(n + 1);
    c0_.resize(n + 1);
    c1_.resize(n + 1);
    c2_.assign(n + 1, 0.0);
    c3_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = knots_.spacing(i);
        const std::size_t s = i + 1;
        base_[s] = knots_[i];
        c0_[s] = values_[i];
        c1_[s] = (values_[i + 1] - values_[i]) / h - h * (2.0 * gamma_[i] + gamma_[i + 1]) / 6.0;
        c2_[s] = 0.5 * gamma_[i];
        c3_[s] = (gamma_[i + 1] - gamma_[i]) / (6.0 * h);
    }
    base_[0] = knots_[0];
    c0_[0] = values_[0];
    c1_[0] = c1_[1];

    const double h_last = knots_.spacing(n - 2);
    base_[n] = knots_[n - 1];
    c0_[n] = values_[n - 1];
    c1_[n] = c1_[n - 1] + h_last * (2.0 * c2_[n - 1] + 3.0 * h_last * c3_[n - 1]);
}

std::size_t NaturalCubicSpline::segment_of(double x) const
{
    const auto pts = knots_.points();
    return static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), x) - pts.begin());
}

simd::PiecewiseCubicView NaturalCubicSpline::power_form() const
{
    return {base_, c0_, c1_, c2_, c3_};
}

double NaturalCubicSpline::evaluate(double x, int order) const
{
    if (!std::isfinite(x))
        throw InputError("evaluation point is not finite");
    const std::size_t s = segment_of(x);
    const double t = x - base_[s];
    switch (order) {
    case 0:
        return c0_[s] + t * (c1_[s] + t * (c2_[s] + t * c3_[s]));
    case 1:
        return c1_[s] + t * (2.0 * c2_[s] + 3.0 * t * c3_[s]);
    case 2:
        return 2.0 * c2_[s] + 6.0 * t * c3_[s];
    default:
        throw InputError("derivative order must be 0, 1 or 2");
    }
}

void NaturalCubicSpline::evaluate_sorted(std::span<const double> x, std::span<double> out) const
{
    if (out.size() != x.size())
        throw InputError("output span length does not match the evaluation points");
    const auto pts = knots_.points();
    const std::size_t n = pts.size();
    std::vector<std::int32_t> seg(x.size());
    std::size_t s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k]) || (k > 0 && x[k] < x[k - 1]))
            throw InputError("evaluate_sorted requires finite, non-decreasing points");
        while (s < n && pts[s] <= x[k])
            ++s;
        seg[k] = static_cast<std::int32_t>(s);
    }
    simd::eval_piecewise_cubic(power_form(), x, seg, out);
}

double NaturalCubicSpline::roughness() const
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < gamma_.size(); ++i) {
        const double a = gamma_[i];
        const double b = gamma_[i + 1];
        total += knots_.spacing(i) / 3.0 * (a * a + a * b + b * b);
    }
    return total;
}

NaturalCubicSpline fit(const DesignPoints& design, std::span<const double> y,
                       const SmoothingParams& params)
{
    const std::size_t n = design.size();
    if (y.size() != n)
        throw InputError("response count " + std::to_string(y.size()) +
                         " does not match design size " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(y[i]))
            throw InputError("response " + std::to_string(i) + " is not finite");

    const double p = params.penalty_scale(n);
    const std::size_t m = n - 2;

    std::vector<double> inv_h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        inv_h[i] = 1.0 / design.spacing(i);

    // Column j of Q corresponds to interior knot k = j + 1 and has entries
    // (1/h_{k-1}, -(1/h_{k-1} + 1/h_k), 1/h_k) in rows k-1, k, k+1.
    auto q_lo = [&](std::size_t j) { return inv_h[j]; };
    auto q_mid = [&](std::size_t j) { return -(inv_h[j] + inv_h[j + 1]); };
    auto q_hi = [&](std::size_t j) { return inv_h[j + 1]; };

    PentadiagonalMatrix a(m);
    std::vector<double> gamma_inner(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double h_prev = design.spacing(j);
        const double h_next = design.spacing(j + 1);
        a.main[j] = (h_prev + h_next) / 3.0 +
                    p * (q_lo(j) * q_lo(j) + q_mid(j) * q_mid(j) + q_hi(j) * q_hi(j));
        if (j + 1 < m)
            a.upper1[j] = h_next / 6.0 + p * (q_mid(j) * q_lo(j + 1) + q_hi(j) * q_mid(j + 1));
        if (j + 2 < m)
            a.upper2[j] = p * q_hi(j) * q_lo(j + 2);
        gamma_inner[j] = (y[j + 2] - y[j + 1]) * inv_h[j + 1] - (y[j + 1] - y[j]) * inv_h[j];
    }

    PentadiagonalLdlt(a).solve_in_place(gamma_inner);

    std::vector<double> values(y.begin(), y.end());
    for (std::size_t j = 0; j < m; ++j) {
        const double g = p * gamma_inner[j];
        values[j] -= g * q_lo(j);
        values[j + 1] -= g * q_mid(j);
        values[j + 2] -= g * q_hi(j);
    }

    std::vector<double> gamma(n, 0.0);
    std::copy(gamma_inner.begin(), gamma_inner.end(), gamma.begin() + 1);
    return NaturalCubicSpline(design, std::move(values), std::move(gamma));
}

double evaluate(const NaturalCubicSpline& spline, double x, int order)
{
    return spline.evaluate(x, order);
}

double roughness(const NaturalCubicSpline& spline) { return spline.roughness(); }

FitDiagnostics diagnostics(const NaturalCubicSpline& spline, std::span<const double> y,
                           const SmoothingParams& params)
{
    if (y.size() != spline.size())
        throw InputError("response count does not match spline size");
    FitDiagnostics d;
    const auto v = spline.values();
    for (std::size_t i = 0; i < y.size(); ++i)
        d.residual_mse += (v[i] - y[i]) * (v[i] - y[i]);
    d.residual_mse /= static_cast<double>(y.size());
    d.roughness = spline.roughness();
    d.objective = d.residual_mse + params.lambda * d.roughness;
    return d;
}

} // namespace robustspline
