#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robustspline {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Strictly increasing sample locations inside an open interval (a, b).
///
/// Construction validates ordering, finiteness and containment and throws
/// DesignError otherwise. Duplicates are rejected; callers aggregate ties.
class DesignPoints {
public:
    DesignPoints(std::vector<double> x, Interval domain);

    std::size_t size() const { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }
    std::span<const double> points() const { return x_; }
    const Interval& domain() const { return domain_; }

    double spacing(std::size_t i) const { return x_[i + 1] - x_[i]; }
    double min_spacing() const { return min_gap_; }
    double max_spacing() const { return max_gap_; }
    /// Quasi-uniformity ratio Δmax/Δmin.
    double quasi_uniformity() const { return max_gap_ / min_gap_; }

private:
    std::vector<double> x_;
    Interval domain_;
    double min_gap_ = 0.0;
    double max_gap_ = 0.0;
};

} // namespace robustspline
