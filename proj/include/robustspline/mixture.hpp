#pragma once

#include "robustspline/rng.hpp"

namespace robustspline {

struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;

    double pdf(double x) const;
    double cdf(double x) const;
};

/// Support used for quadrature and sampling: [min μ − 12σ, max μ + 12σ].
struct Support {
    double lo;
    double hi;
};
Support mixture_support(const Gaussian& p1, const Gaussian& p2);

/// T = ∫_{P₂ ≥ P₁} (P₂ − P₁), integrated piecewise between the density
/// crossings by adaptive Simpson (tolerance 1e-9).
double positive_part_mass(const Gaussian& p1, const Gaussian& p2);

/// α = T / (1 + T).
double mixing_weight(const Gaussian& p1, const Gaussian& p2);

/// Residual densities making (1−α)P₁ + αQ₁ = (1−α)P₂ + αQ₂:
///     Q₁ = (1−α)/α (P₂ − P₁)₊,   Q₂ = (1−α)/α (P₁ − P₂)₊.
/// When P₁ = P₂ (α = 0) both residuals are taken as P₁.
class MixturePair {
public:
    MixturePair(Gaussian p1, Gaussian p2, double alpha);

    double alpha() const { return alpha_; }
    const Gaussian& p1() const { return p1_; }
    const Gaussian& p2() const { return p2_; }
    bool degenerate() const { return degenerate_; }

    double q1(double u) const;
    double q2(double u) const;

    /// Rejection samplers: Q₁ from proposal P₂ accepted with probability
    /// max(0, 1 − P₁/P₂); Q₂ symmetrically from P₁.
    double sample_q1(Rng& rng) const;
    double sample_q2(Rng& rng) const;

    /// (1−α)P_k + αQ_k, the law of a response after the attack.
    double mixture1(double u) const;
    double mixture2(double u) const;

private:
    Gaussian p1_;
    Gaussian p2_;
    double alpha_;
    double scale_; // (1−α)/α
    bool degenerate_;
};

MixturePair residual_densities(const Gaussian& p1, const Gaussian& p2, double alpha);

} // namespace robustspline
