#include "robustspline/banded.hpp"

#include "robustspline/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace robustspline {

PentadiagonalLdlt::PentadiagonalLdlt(const PentadiagonalMatrix& a)
    : d_(a.size()), l1_(a.upper1.size()), l2_(a.upper2.size())
{
    const std::size_t m = a.size();
    double scale = 0.0;
    for (double v : a.main)
        scale = std::max(scale, std::abs(v));
    const double tiny = scale * 64.0 * std::numeric_limits<double>::epsilon();

    for (std::size_t i = 0; i < m; ++i) {
        double di = a.main[i];
        if (i >= 1)
            di -= l1_[i - 1] * l1_[i - 1] * d_[i - 1];
        if (i >= 2)
            di -= l2_[i - 2] * l2_[i - 2] * d_[i - 2];
        if (!(di > tiny) || !std::isfinite(di))
            throw NumericalError("banded Cholesky breakdown at pivot " + std::to_string(i) +
                                 " (system not positive definite)");
        d_[i] = di;
        if (i + 1 < m) {
            double v = a.upper1[i];
            if (i >= 1)
                v -= l1_[i - 1] * l2_[i - 1] * d_[i - 1];
            l1_[i] = v / di;
        }
        if (i + 2 < m)
            l2_[i] = a.upper2[i] / di;
    }
}

void PentadiagonalLdlt::solve_in_place(std::span<double> b) const
{
    const std::size_t m = d_.size();
    if (b.size() != m)
        throw InputError("right-hand side length does not match the banded system");
    for (std::size_t i = 1; i < m; ++i) {
        b[i] -= l1_[i - 1] * b[i - 1];
        if (i >= 2)
            b[i] -= l2_[i - 2] * b[i - 2];
    }
    for (std::size_t i = 0; i < m; ++i)
        b[i] /= d_[i];
    for (std::size_t k = m; k-- > 0;) {
        if (k + 1 < m)
            b[k] -= l1_[k] * b[k + 1];
        if (k + 2 < m)
            b[k] -= l2_[k] * b[k + 2];
    }
}

} // namespace robustspline
