#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace robustspline {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample mean and standard error (sample sd / √n); stderr is 0 for n = 1.
MeanStderr mean_stderr(std::span<const double> values);

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS statistic of sorted samples against a continuous CDF.
double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value 1.63·√((n+m)/(nm)); pass m = 0 for one sample.
double ks_critical_1pct(std::size_t n, std::size_t m = 0);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y ≈ intercept + slope·x.
LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

} // namespace robustspline
