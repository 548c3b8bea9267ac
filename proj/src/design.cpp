#include "robustspline/design.hpp"

#include "robustspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace robustspline {

DesignPoints::DesignPoints(std::vector<double> x, Interval domain)
    : x_(std::move(x)), domain_(domain)
{
    if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi)) || !(domain_.lo < domain_.hi))
        throw DesignError("design domain must be a finite interval with a < b");
    if (x_.size() < 3)
        throw DesignError("design needs at least 3 points, got " + std::to_string(x_.size()));

    min_gap_ = HUGE_VAL;
    max_gap_ = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        const double xi = x_[i];
        if (!std::isfinite(xi))
            throw DesignError("design point " + std::to_string(i) + " is not finite");
        if (!(xi > domain_.lo && xi < domain_.hi))
            throw DesignError("design point " + std::to_string(i) + " lies outside the open domain");
        if (i > 0) {
            const double gap = xi - x_[i - 1];
            if (!(gap > 0.0))
                throw DesignError("design points must be strictly increasing (index " +
                                  std::to_string(i) + ")");
            min_gap_ = std::min(min_gap_, gap);
            max_gap_ = std::max(max_gap_, gap);
        }
    }
}

} // namespace robustspline
