#include "robustspline/targets.hpp"

#include "robustspline/density.hpp"
#include "robustspline/error.hpp"

#include <algorithm>
#include <cmath>

namespace robustspline {

MLP3Params MLP3Params::random(std::size_t hidden, std::uint64_t seed)
{
    if (hidden == 0)
        throw InputError("MLP hidden width must be positive");
    MLP3Params p;
    p.hidden = hidden;
    p.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto fill = [&](std::vector<double>& v, std::size_t count) {
        v.resize(count);
        for (auto& w : v)
            w = u(rng);
    };
    fill(p.w1, hidden);
    fill(p.b1, hidden);
    fill(p.w2, hidden * hidden);
    fill(p.b2, hidden);
    fill(p.w3, hidden);
    p.b3 = u(rng);
    return p;
}

MLP3Params MLP3Params::constant(std::size_t hidden, double value)
{
    MLP3Params p;
    p.hidden = hidden;
    p.w1.assign(hidden, value);
    p.b1.assign(hidden, value);
    p.w2.assign(hidden * hidden, value);
    p.b2.assign(hidden, value);
    p.w3.assign(hidden, value);
    p.b3 = value;
    p.validate();
    return p;
}

void MLP3Params::validate() const
{
    const std::size_t h = hidden;
    if (h == 0 || w1.size() != h || b1.size() != h || w2.size() != h * h || b2.size() != h ||
        w3.size() != h)
        throw InputError("MLP parameter shapes do not match the hidden width");
    auto in_range = [](double v) { return v >= -1.0 && v <= 1.0; };
    for (const auto* v : {&w1, &b1, &w2, &b2, &w3})
        if (!std::all_of(v->begin(), v->end(), in_range))
            throw InputError("MLP weights must lie in [-1, 1]");
    if (!in_range(b3))
        throw InputError("MLP weights must lie in [-1, 1]");
}

double mlp_forward(const MLP3Params& p, double x)
{
    const std::size_t h = p.hidden;
    std::vector<double> a1(h), a2(h);
    for (std::size_t i = 0; i < h; ++i)
        a1[i] = std::tanh(p.w1[i] * x + p.b1[i]);
    for (std::size_t i = 0; i < h; ++i) {
        double z = p.b2[i];
        for (std::size_t k = 0; k < h; ++k)
            z += p.w2[i * h + k] * a1[k];
        a2[i] = std::tanh(z);
    }
    double out = p.b3;
    for (std::size_t i = 0; i < h; ++i)
        out += p.w3[i] * a2[i];
    return out;
}

TargetFunction::TargetFunction(TargetKind kind, std::string name, std::function<double(double)> f,
                               Interval domain, double bound)
    : kind_(kind), name_(std::move(name)), f_(std::move(f)), domain_(domain), bound_(bound)
{
}

TargetFunction TargetFunction::x_sin_x(Interval domain)
{
    // |x sin x| ≤ |x|
    const double bound = std::max(std::abs(domain.lo), std::abs(domain.hi));
    return {TargetKind::XSinX, "xsinx", [](double x) { return x * std::sin(x); }, domain, bound};
}

TargetFunction TargetFunction::mlp3(MLP3Params params, Interval domain)
{
    params.validate();
    const double bound = static_cast<double>(params.hidden) + 1.0;
    return {TargetKind::MLP3, "mlp3",
            [p = std::move(params)](double x) { return mlp_forward(p, x); }, domain, bound};
}

TargetFunction TargetFunction::zero(Interval domain)
{
    return {TargetKind::Zero, "zero", [](double) { return 0.0; }, domain, 0.0};
}

TargetFunction TargetFunction::linear(double intercept, double slope, Interval domain)
{
    const double bound = std::max(std::abs(intercept + slope * domain.lo),
                                  std::abs(intercept + slope * domain.hi));
    return {TargetKind::Linear, "linear",
            [intercept, slope](double x) { return intercept + slope * x; }, domain, bound};
}

TargetFunction TargetFunction::custom(std::function<double(double)> f, Interval domain,
                                      double bound, std::string name)
{
    return {TargetKind::Custom, std::move(name), std::move(f), domain, bound};
}

DesignPoints generate_design(const DesignSpec& spec)
{
    const Interval& d = spec.domain;
    if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi))
        throw InputError("design domain must be a finite interval with a < b");
    if (spec.kind == DesignKind::Explicit)
        return DesignPoints(spec.points, d);
    if (spec.n < 3)
        throw InputError("design size must be at least 3");

    const double denom = static_cast<double>(spec.n + 1);
    std::vector<double> x(spec.n);
    if (spec.kind == DesignKind::UniformQuantile) {
        for (std::size_t i = 0; i < spec.n; ++i)
            x[i] = d.lo + d.length() * static_cast<double>(i + 1) / denom;
    } else {
        const auto density = DensityModel::truncated_gaussian(spec.gaussian_mean(),
                                                              spec.gaussian_sd(), d);
        for (std::size_t i = 0; i < spec.n; ++i)
            x[i] = density.quantile(static_cast<double>(i + 1) / denom);
    }
    return DesignPoints(std::move(x), d);
}

CleanDataset sample_dataset(const TargetFunction& f, const DesignPoints& design, double sigma,
                            Rng& rng)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw InputError("noise standard deviation must be non-negative");
    std::vector<double> y(design.size());
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < design.size(); ++i) {
        const double eps = noise(rng);
        y[i] = f(design[i]) + sigma * eps;
    }
    return CleanDataset{design, std::move(y), sigma, f};
}

} // namespace robustspline
