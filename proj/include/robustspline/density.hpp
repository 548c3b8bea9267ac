#pragma once

#include "robustspline/design.hpp"

#include <functional>

namespace robustspline {

/// Design density p on a closed interval together with its CDF F.
class DensityModel {
public:
    static DensityModel uniform(Interval domain);
    /// Gaussian N(mean, sd²) conditioned on the domain.
    static DensityModel truncated_gaussian(double mean, double sd, Interval domain);
    static DensityModel custom(std::function<double(double)> pdf, std::function<double(double)> cdf,
                               Interval domain, double p_min);

    double pdf(double x) const { return pdf_(x); }
    double cdf(double x) const;
    /// F⁻¹(u) by bisection to 1e-12 in x.
    double quantile(double u) const;
    double p_min() const { return p_min_; }
    const Interval& domain() const { return domain_; }

private:
    DensityModel(std::function<double(double)> pdf, std::function<double(double)> cdf,
                 Interval domain, double p_min);

    std::function<double(double)> pdf_;
    std::function<double(double)> cdf_;
    Interval domain_;
    double p_min_;
};

double normal_pdf(double x, double mean, double sd);
double normal_cdf(double x, double mean, double sd);

} // namespace robustspline
