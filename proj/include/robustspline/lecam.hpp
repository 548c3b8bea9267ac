#pragma once

#include <array>
#include <cstddef>

namespace robustspline {

/// Two-hypothesis pair on [0, 1]: f₁ ≡ 0 and
///     f₂(x) = r − x            on [0, r − ε]
///           = g(x)             on [r − ε, r]
///           = 0                for x > r
/// with r = q/n, ε = r² and g the quintic matching value, slope and
/// curvature at both junctions.
class BumpPair {
public:
    BumpPair(std::size_t q, std::size_t n);

    double r_q() const { return r_; }
    double eps_q() const { return eps_; }
    std::size_t q() const { return q_; }
    std::size_t n() const { return n_; }

    /// g in the shifted variable u = x − (r − ε): g = Σ c_k u^k, k = 0..5.
    const std::array<double, 6>& g_coeffs() const { return coeffs_; }
    /// Same polynomial in v = u/ε ∈ [0, 1]: g = Σ d_k v^k.
    const std::array<double, 6>& g_coeffs_normalized() const { return normalized_; }

    /// Derivative of g (order 0..2) at x, as a polynomial (no piece selection).
    double g(double x, int order = 0) const;
    double f1(double, int = 0) const { return 0.0; }
    double f2(double x, int order = 0) const;
    double junction() const { return r_ - eps_; }
    /// r − junction(); equals ε up to rounding and is what g is scaled by.
    double width() const { return width_; }

    /// ∫₀¹ (f₂″)² in closed form.
    double curvature_energy() const;

private:
    std::size_t q_;
    std::size_t n_;
    double r_;
    double eps_;
    double width_ = 0.0;
    std::array<long double, 6> precise_{};
    std::array<double, 6> coeffs_{};
    std::array<double, 6> normalized_{};
};

inline BumpPair build_pair(std::size_t q, std::size_t n) { return BumpPair(q, n); }

/// ‖f₁ − f₂‖²_{L₂[0,1]} by exact polynomial integration.
double l2_gap_squared(const BumpPair& pair);

/// ‖f₁ − f₂‖_{L∞[0,1]}: max over piece extrema and a dense grid.
double linf_gap(const BumpPair& pair);

/// Two-point bound (gap²/4)(1 − TV).
double lecam_lower_bound(double gap_squared, double tv);

} // namespace robustspline
