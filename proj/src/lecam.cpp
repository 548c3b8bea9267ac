#include "robustspline/lecam.hpp"

#include "robustspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace robustspline {

namespace {

using Real = long double;

// Gaussian elimination with partial pivoting on a 6×6 system.
std::array<Real, 6> solve6(std::array<std::array<Real, 7>, 6> m)
{
    constexpr int n = 6;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        if (!(std::abs(m[piv][col]) > 1e-14))
            throw ConstructionError("quintic boundary system is singular");
        std::swap(m[piv], m[col]);
        for (int r = col + 1; r < n; ++r) {
            const Real f = m[r][col] / m[col][col];
            for (int c = col; c <= n; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    std::array<Real, 6> x{};
    for (int r = n - 1; r >= 0; --r) {
        Real acc = m[r][n];
        for (int c = r + 1; c < n; ++c)
            acc -= m[r][c] * x[c];
        x[r] = acc / m[r][r];
    }
    return x;
}

// Row for the order-th derivative of Σ d_k v^k at v.
std::array<Real, 6> derivative_row(Real v, int order)
{
    std::array<Real, 6> row{};
    for (int k = order; k < 6; ++k) {
        Real fall = 1.0L;
        for (int j = 0; j < order; ++j)
            fall *= k - j;
        row[k] = fall * std::pow(v, k - order);
    }
    return row;
}

Real poly_eval(const std::array<Real, 6>& d, Real v, int order)
{
    Real acc = 0.0L;
    for (int k = 5; k >= order; --k) {
        Real fall = 1.0L;
        for (int j = 0; j < order; ++j)
            fall *= k - j;
        acc = acc * v + fall * d[k];
    }
    return acc;
}

} // namespace

BumpPair::BumpPair(std::size_t q, std::size_t n) : q_(q), n_(n)
{
    if (n == 0 || q >= n)
        throw ConstructionError("bump construction needs q < n (got q = " + std::to_string(q) +
                                ", n = " + std::to_string(n) + ")");
    r_ = static_cast<double>(q) / static_cast<double>(n);
    eps_ = r_ * r_;
    if (q == 0)
        return; // f₂ ≡ f₁ ≡ 0

    // Solve in v = u/w so the system is O(1) regardless of ε. w = r − (r − ε)
    // is exact in floating point, so x = r maps to v = 1 exactly. In v the
    // slope condition g′ = −1 reads dg/dv = −w.
    width_ = r_ - junction();
    const Real w = width_;
    const Real rhs[6] = {w, -w, 0.0L, 0.0L, 0.0L, 0.0L};
    const std::pair<Real, int> conds[6] = {{0.0L, 0}, {0.0L, 1}, {0.0L, 2},
                                           {1.0L, 0}, {1.0L, 1}, {1.0L, 2}};
    std::array<std::array<Real, 7>, 6> m{};
    for (int i = 0; i < 6; ++i) {
        const auto row = derivative_row(conds[i].first, conds[i].second);
        std::copy(row.begin(), row.end(), m[i].begin());
        m[i][6] = rhs[i];
    }
    precise_ = solve6(m);
    for (int k = 0; k < 6; ++k) {
        normalized_[k] = static_cast<double>(precise_[k]);
        coeffs_[k] = static_cast<double>(precise_[k] / std::pow(w, k));
    }
}

double BumpPair::g(double x, int order) const
{
    if (q_ == 0)
        return 0.0;
    const Real w = width_;
    const Real v = (static_cast<Real>(x) - junction()) / w;
    return static_cast<double>(poly_eval(precise_, v, order) / std::pow(w, order));
}

double BumpPair::f2(double x, int order) const
{
    if (q_ == 0 || x > r_)
        return 0.0;
    if (x <= junction()) {
        switch (order) {
        case 0: return r_ - x;
        case 1: return -1.0;
        default: return 0.0;
        }
    }
    return g(x, order);
}

double BumpPair::curvature_energy() const
{
    if (q_ == 0)
        return 0.0;
    // g″ = ε⁻² Σ k(k−1) d_k v^{k−2}; du = ε dv.
    double total = 0.0;
    for (int j = 2; j < 6; ++j)
        for (int k = 2; k < 6; ++k)
            total += j * (j - 1) * normalized_[j] * k * (k - 1) * normalized_[k] / (j + k - 3);
    return total / (width_ * width_ * width_);
}

double l2_gap_squared(const BumpPair& pair)
{
    if (pair.q() == 0)
        return 0.0;
    const double r = pair.r_q();
    const double e = pair.eps_q();
    const double linear = (r * r * r - e * e * e) / 3.0;
    const auto& d = pair.g_coeffs_normalized();
    double bump = 0.0;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
            bump += d[j] * d[k] / (j + k + 1);
    return linear + pair.width() * bump;
}

double linf_gap(const BumpPair& pair)
{
    if (pair.q() == 0)
        return 0.0;
    // Linear piece peaks at x = 0; the quintic piece at an endpoint or a root of g′.
    double best = std::abs(pair.f2(0.0));
    const double lo = pair.junction();
    const double hi = pair.r_q();
    constexpr int cells = 4096;
    double prev_x = lo;
    double prev_d = pair.g(lo, 1);
    for (int i = 0; i <= cells; ++i) {
        const double x = lo + (hi - lo) * i / cells;
        best = std::max(best, std::abs(pair.g(x)));
        const double d = pair.g(x, 1);
        if (i > 0 && ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0))) {
            double a = prev_x, b = x, da = prev_d;
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                const double dm = pair.g(m, 1);
                if ((dm < 0.0) == (da < 0.0)) {
                    a = m;
                    da = dm;
                } else {
                    b = m;
                }
            }
            best = std::max(best, std::abs(pair.g(0.5 * (a + b))));
        }
        prev_x = x;
        prev_d = d;
    }
    return best;
}

double lecam_lower_bound(double gap_squared, double tv)
{
    if (!(tv >= 0.0 && tv <= 1.0))
        throw InputError("total variation must lie in [0, 1]");
    if (!(gap_squared >= 0.0))
        throw InputError("squared gap must be non-negative");
    return 0.25 * gap_squared * (1.0 - tv);
}

} // namespace robustspline
