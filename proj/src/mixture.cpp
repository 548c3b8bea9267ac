#include "robustspline/mixture.hpp"

#include "robustspline/density.hpp"
#include "robustspline/error.hpp"
#include "robustspline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace robustspline {

double Gaussian::pdf(double x) const { return normal_pdf(x, mean, sd); }
double Gaussian::cdf(double x) const { return normal_cdf(x, mean, sd); }

Support mixture_support(const Gaussian& p1, const Gaussian& p2)
{
    const double s = std::max(p1.sd, p2.sd);
    return {std::min(p1.mean, p2.mean) - 12.0 * s, std::max(p1.mean, p2.mean) + 12.0 * s};
}

namespace {

void check(const Gaussian& p)
{
    if (!(p.sd > 0.0) || !std::isfinite(p.mean) || !std::isfinite(p.sd))
        throw InputError("Gaussian needs finite mean and positive standard deviation");
}

bool same(const Gaussian& a, const Gaussian& b) { return a.mean == b.mean && a.sd == b.sd; }

} // namespace

double positive_part_mass(const Gaussian& p1, const Gaussian& p2)
{
    check(p1);
    check(p2);
    if (same(p1, p2))
        return 0.0;
    const Support sup = mixture_support(p1, p2);
    auto diff = [&](double u) { return p2.pdf(u) - p1.pdf(u); };

    // Breakpoints at sign changes of P₂ − P₁ so each panel is smooth.
    std::vector<double> breaks{sup.lo};
    constexpr int cells = 4096;
    double prev_u = sup.lo;
    double prev = diff(sup.lo);
    for (int i = 1; i <= cells; ++i) {
        const double u = sup.lo + (sup.hi - sup.lo) * i / cells;
        const double cur = diff(u);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            double a = prev_u, b = u, fa = prev;
            for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = diff(m);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            breaks.push_back(0.5 * (a + b));
        }
        prev_u = u;
        prev = cur;
    }
    breaks.push_back(sup.hi);

    const double tol = 1e-9 / static_cast<double>(breaks.size() - 1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const auto q = adaptive_simpson([&](double u) { return std::max(0.0, diff(u)); },
                                        breaks[k], breaks[k + 1], tol, 50);
        if (!q.converged)
            throw NumericalError("mixing-weight quadrature did not converge");
        total += q.value;
    }
    return total;
}

double mixing_weight(const Gaussian& p1, const Gaussian& p2)
{
    const double t = positive_part_mass(p1, p2);
    return t / (1.0 + t);
}

MixturePair::MixturePair(Gaussian p1, Gaussian p2, double alpha)
    : p1_(p1), p2_(p2), alpha_(alpha), scale_(0.0), degenerate_(false)
{
    check(p1_);
    check(p2_);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InputError("mixing weight must lie in [0, 1]");
    if (alpha == 0.0) {
        if (!same(p1_, p2_))
            throw LogicError("mixing weight 0 is only valid for identical distributions");
        degenerate_ = true;
        return;
    }
    scale_ = (1.0 - alpha) / alpha;
}

double MixturePair::q1(double u) const
{
    if (degenerate_)
        return p1_.pdf(u);
    return scale_ * std::max(0.0, p2_.pdf(u) - p1_.pdf(u));
}

double MixturePair::q2(double u) const
{
    if (degenerate_)
        return p1_.pdf(u);
    return scale_ * std::max(0.0, p1_.pdf(u) - p2_.pdf(u));
}

double MixturePair::mixture1(double u) const { return (1.0 - alpha_) * p1_.pdf(u) + alpha_ * q1(u); }
double MixturePair::mixture2(double u) const { return (1.0 - alpha_) * p2_.pdf(u) + alpha_ * q2(u); }

namespace {

double rejection(const Gaussian& proposal, const Gaussian& other, Rng& rng)
{
    std::normal_distribution<double> draw(proposal.mean, proposal.sd);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr long max_attempts = 1L << 32;
    for (long k = 0; k < max_attempts; ++k) {
        const double u = draw(rng);
        const double accept = std::max(0.0, 1.0 - other.pdf(u) / proposal.pdf(u));
        if (unit(rng) < accept)
            return u;
    }
    throw NumericalError("rejection sampler exceeded its attempt budget");
}

} // namespace

double MixturePair::sample_q1(Rng& rng) const
{
    if (degenerate_)
        return std::normal_distribution<double>(p1_.mean, p1_.sd)(rng);
    return rejection(p2_, p1_, rng);
}

double MixturePair::sample_q2(Rng& rng) const
{
    if (degenerate_)
        return std::normal_distribution<double>(p1_.mean, p1_.sd)(rng);
    return rejection(p1_, p2_, rng);
}

MixturePair residual_densities(const Gaussian& p1, const Gaussian& p2, double alpha)
{
    return MixturePair(p1, p2, alpha);
}

} // namespace robustspline
