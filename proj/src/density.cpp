#include "robustspline/density.hpp"

#include "robustspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace robustspline {

double normal_pdf(double x, double mean, double sd)
{
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double mean, double sd)
{
    return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

DensityModel::DensityModel(std::function<double(double)> pdf, std::function<double(double)> cdf,
                           Interval domain, double p_min)
    : pdf_(std::move(pdf)), cdf_(std::move(cdf)), domain_(domain), p_min_(p_min)
{
    if (!(domain_.lo < domain_.hi))
        throw InputError("density domain must satisfy a < b");
    if (!(p_min_ > 0.0))
        throw DensityError("density lower bound p_min must be positive");
}

DensityModel DensityModel::uniform(Interval domain)
{
    const double len = domain.length();
    return DensityModel(
        [len](double) { return 1.0 / len; },
        [domain, len](double x) { return (x - domain.lo) / len; }, domain, 1.0 / len);
}

DensityModel DensityModel::truncated_gaussian(double mean, double sd, Interval domain)
{
    if (!(sd > 0.0))
        throw InputError("truncated Gaussian needs a positive standard deviation");
    const double f_lo = normal_cdf(domain.lo, mean, sd);
    const double mass = normal_cdf(domain.hi, mean, sd) - f_lo;
    if (!(mass > 0.0))
        throw DensityError("truncated Gaussian has no mass on the domain");
    auto pdf = [=](double x) { return normal_pdf(x, mean, sd) / mass; };
    auto cdf = [=](double x) { return (normal_cdf(x, mean, sd) - f_lo) / mass; };
    const double p_min = std::min(pdf(domain.lo), pdf(domain.hi));
    return DensityModel(pdf, cdf, domain, p_min);
}

DensityModel DensityModel::custom(std::function<double(double)> pdf,
                                  std::function<double(double)> cdf, Interval domain, double p_min)
{
    return DensityModel(std::move(pdf), std::move(cdf), domain, p_min);
}

double DensityModel::cdf(double x) const
{
    if (x <= domain_.lo)
        return 0.0;
    if (x >= domain_.hi)
        return 1.0;
    return std::clamp(cdf_(x), 0.0, 1.0);
}

double DensityModel::quantile(double u) const
{
    if (!(u >= 0.0 && u <= 1.0))
        throw InputError("quantile level must lie in [0, 1]");
    double lo = domain_.lo;
    double hi = domain_.hi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace robustspline
