#pragma once

// Dense reference computations used only by the tests. They share no code
// with the library's banded solver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Natural cubic spline basis: 1, x, d_k − d_{n−1} with
// d_k(x) = ((x − ξ_k)₊³ − (x − ξ_n)₊³) / (ξ_n − ξ_k).
class NaturalBasis {
public:
    explicit NaturalBasis(std::vector<double> knots) : xi_(std::move(knots)) {}

    std::size_t size() const { return xi_.size(); }

    long double value(std::size_t j, long double x, int order) const
    {
        if (j == 0)
            return order == 0 ? 1.0L : 0.0L;
        if (j == 1)
            return order == 0 ? x : order == 1 ? 1.0L : 0.0L;
        const std::size_t n = xi_.size();
        return d(j - 2, x, order) - d(n - 2, x, order);
    }

    // Gram matrix of second derivatives; products are piecewise quadratic, so
    // Simpson per knot interval is exact.
    MatL penalty() const
    {
        const std::size_t n = size();
        MatL om = MatL::Zero(n, n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const long double a = xi_[i], b = xi_[i + 1], m = 0.5L * (a + b);
            for (std::size_t j = 2; j < n; ++j)
                for (std::size_t k = 2; k < n; ++k)
                    om(j, k) += (b - a) / 6.0L *
                                (value(j, a, 2) * value(k, a, 2) +
                                 4.0L * value(j, m, 2) * value(k, m, 2) +
                                 value(j, b, 2) * value(k, b, 2));
        }
        return om;
    }

    MatL design_matrix() const
    {
        const std::size_t n = size();
        MatL nm(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                nm(i, j) = value(j, xi_[i], 0);
        return nm;
    }

private:
    long double d(std::size_t k, long double x, int order) const
    {
        const long double xn = xi_.back();
        const long double den = xn - xi_[k];
        return (pow_plus(x - xi_[k], order) - pow_plus(x - xn, order)) / den;
    }

    static long double pow_plus(long double t, int order)
    {
        if (t <= 0.0L)
            return 0.0L;
        switch (order) {
        case 0: return t * t * t;
        case 1: return 3.0L * t * t;
        default: return 6.0L * t;
        }
    }

    std::vector<double> xi_;
};

// Knot values of argmin (1/n)Σ(g(x_i) − y_i)² + λ∫(g″)².
inline std::vector<double> smoothing_fit(const std::vector<double>& x, const std::vector<double>& y,
                                         double lambda)
{
    const NaturalBasis basis(x);
    const std::size_t n = x.size();
    const MatL nm = basis.design_matrix();
    const MatL lhs = nm.transpose() * nm + static_cast<long double>(n) * lambda * basis.penalty();
    VecL yy(n);
    for (std::size_t i = 0; i < n; ++i)
        yy(i) = y[i];
    const VecL theta = lhs.fullPivLu().solve(nm.transpose() * yy);
    const VecL fitted = nm * theta;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>(fitted(i));
    return out;
}

// Dense hat matrix N(NᵀN + nλΩ)⁻¹Nᵀ.
inline Eigen::MatrixXd smoother(const std::vector<double>& x, double lambda)
{
    const NaturalBasis basis(x);
    const std::size_t n = x.size();
    const MatL nm = basis.design_matrix();
    const MatL lhs = nm.transpose() * nm + static_cast<long double>(n) * lambda * basis.penalty();
    const MatL s = nm * lhs.fullPivLu().solve(nm.transpose());
    return s.cast<double>();
}

// Crossings of two Gaussian densities, solving the quadratic log p₁ = log p₂.
inline std::vector<double> gaussian_crossings(double m1, double s1, double m2, double s2)
{
    const double a = 1.0 / (2 * s2 * s2) - 1.0 / (2 * s1 * s1);
    const double b = m1 / (s1 * s1) - m2 / (s2 * s2);
    const double c = m2 * m2 / (2 * s2 * s2) - m1 * m1 / (2 * s1 * s1) + std::log(s2 / s1);
    std::vector<double> roots;
    if (std::abs(a) < 1e-14) {
        if (b != 0.0)
            roots.push_back(-c / b);
    } else {
        const double disc = b * b - 4 * a * c;
        if (disc > 0) {
            const double sq = std::sqrt(disc);
            roots.push_back((-b - sq) / (2 * a));
            roots.push_back((-b + sq) / (2 * a));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline double phi(double x, double m, double s) { return 0.5 * std::erfc(-(x - m) / (s * std::sqrt(2.0))); }
inline double density(double x, double m, double s)
{
    const double z = (x - m) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
}

// ∫_{−∞}^{u} (P₂ − P₁)₊ in closed form from the normal CDFs.
inline double positive_part_cdf(double u, double m1, double s1, double m2, double s2)
{
    std::vector<double> cuts = gaussian_crossings(m1, s1, m2, s2);
    std::vector<double> edges{-INFINITY};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(INFINITY);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k];
        const double hi = std::min(edges[k + 1], u);
        if (hi <= lo)
            break;
        const double mid = std::isfinite(lo) && std::isfinite(edges[k + 1])
                               ? 0.5 * (lo + edges[k + 1])
                               : std::isfinite(lo) ? lo + 1.0 : edges[k + 1] - 1.0;
        const double probe = std::isfinite(mid) ? mid : 0.0;
        if (density(probe, m2, s2) > density(probe, m1, s1))
            total += (phi(hi, m2, s2) - phi(lo, m2, s2)) - (phi(hi, m1, s1) - phi(lo, m1, s1));
    }
    return total;
}

} // namespace oracle
