#include "robustspline/adversary.hpp"

#include "robustspline/error.hpp"
#include "robustspline/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace robustspline {

const char* attack_name(AttackKind kind)
{
    switch (kind) {
    case AttackKind::Random: return "random";
    case AttackKind::Greedy: return "greedy";
    case AttackKind::Concentrated: return "concentrated";
    case AttackKind::Mixture: return "mixture";
    }
    return "unknown";
}

std::optional<AttackKind> parse_attack_kind(const std::string& name)
{
    for (auto k : {AttackKind::Random, AttackKind::Greedy, AttackKind::Concentrated,
                   AttackKind::Mixture})
        if (name == attack_name(k))
            return k;
    return std::nullopt;
}

namespace {

void check_budget(const CleanDataset& ds, std::size_t q, double bound)
{
    if (q > ds.y.size())
        throw BudgetError("corruption budget q = " + std::to_string(q) + " exceeds n = " +
                          std::to_string(ds.y.size()));
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw InputError("adversary bound M must be positive and finite");
}

CorruptedDataset unchanged(const CleanDataset& ds, std::size_t q, double bound)
{
    return CorruptedDataset{ds.design, ds.y, {}, q, bound, 0, {}};
}

} // namespace

CorruptedDataset random_attack(const CleanDataset& ds, std::size_t q, double bound, Rng& rng)
{
    check_budget(ds, q, bound);
    auto out = unchanged(ds, q, bound);
    const std::size_t n = ds.y.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher–Yates: the first q slots are a uniform q-subset.
    for (std::size_t k = 0; k < q; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, n - 1);
        std::swap(idx[k], idx[pick(rng)]);
    }
    out.corrupted.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(q));
    std::sort(out.corrupted.begin(), out.corrupted.end());
    for (std::size_t i : out.corrupted)
        out.y_tilde[i] = bound;
    return out;
}

CorruptedDataset greedy_attack(const CleanDataset& ds, std::size_t q, double bound,
                               double baseline_lambda)
{
    check_budget(ds, q, bound);
    auto out = unchanged(ds, q, bound);
    if (q == 0)
        return out;

    const auto baseline = fit(ds.design, ds.y, SmoothingParams(baseline_lambda));
    const auto fitted = baseline.values();
    const std::size_t n = ds.y.size();
    std::vector<bool> taken(n, false);
    for (std::size_t round = 0; round < q; ++round) {
        std::size_t best = n;
        double best_loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i])
                continue;
            const double r = fitted[i] - out.y_tilde[i];
            const double loss = r * r;
            if (best == n || loss < best_loss) {
                best = i;
                best_loss = loss;
            }
        }
        taken[best] = true;
        out.pick_order.push_back(best);
        const double sign = fitted[best] - out.y_tilde[best] >= 0.0 ? 1.0 : -1.0;
        double v = out.y_tilde[best] + bound * sign;
        if (v > bound || v < -bound) {
            v = std::clamp(v, -bound, bound);
            ++out.clamped;
        }
        out.y_tilde[best] = v;
    }
    out.corrupted = out.pick_order;
    std::sort(out.corrupted.begin(), out.corrupted.end());
    return out;
}

std::size_t concentrated_window_start(std::size_t n, std::size_t q)
{
    if (q > n)
        throw BudgetError("corruption budget exceeds n");
    const long median_rank = static_cast<long>(n / 2) + 1;
    long start = median_rank - static_cast<long>(q / 2);
    start = std::clamp(start, 1L, static_cast<long>(n - q) + 1);
    return static_cast<std::size_t>(start - 1);
}

CorruptedDataset concentrated_attack(const CleanDataset& ds, std::size_t q, double bound)
{
    check_budget(ds, q, bound);
    auto out = unchanged(ds, q, bound);
    if (q == 0)
        return out;
    const std::size_t start = concentrated_window_start(ds.y.size(), q);
    for (std::size_t i = start; i < start + q; ++i) {
        out.corrupted.push_back(i);
        out.y_tilde[i] = bound;
    }
    return out;
}

DesignPoints lower_bound_design(std::size_t n)
{
    if (n < 3)
        throw ConstructionError("lower-bound design needs n >= 3");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return DesignPoints(std::move(x), {0.0, 1.0 + 1.0 / static_cast<double>(n)});
}

namespace {

void check_construction_design(const DesignPoints& design, std::size_t n)
{
    if (design.size() != n)
        throw ConstructionError("design size does not match the bump construction");
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = static_cast<double>(i + 1) / static_cast<double>(n);
        if (std::abs(design[i] - expected) > 1e-12)
            throw ConstructionError("mixture attack requires the design x_i = i/n");
    }
}

} // namespace

MixtureAdversary::MixtureAdversary(const DesignPoints& design, const BumpPair& pair, double sigma)
    : design_(design), bump_(pair), sigma_(sigma)
{
    check_construction_design(design_, pair.n());
    if (!(sigma > 0.0))
        throw InputError("mixture attack needs a positive noise level");
    for (std::size_t i = 0; i < design_.size() && design_[i] < pair.r_q(); ++i) {
        const Gaussian p1{pair.f1(design_[i]), sigma};
        const Gaussian p2{pair.f2(design_[i]), sigma};
        pairs_.push_back(residual_densities(p1, p2, mixing_weight(p1, p2)));
    }
}

CorruptedDataset MixtureAdversary::apply(const CleanDataset& ds, Hypothesis truth, Rng& rng) const
{
    check_construction_design(ds.design, bump_.n());
    auto out = unchanged(ds, bump_.q(), 0.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto& mp = pairs_[i];
        if (unit(rng) < mp.alpha()) {
            out.y_tilde[i] = truth == Hypothesis::F1 ? mp.sample_q1(rng) : mp.sample_q2(rng);
            out.corrupted.push_back(i);
        }
    }
    return out;
}

CorruptedDataset mixture_attack(const CleanDataset& ds, Hypothesis truth, const BumpPair& pair,
                                Rng& rng)
{
    return MixtureAdversary(ds.design, pair, ds.sigma).apply(ds, truth, rng);
}

CleanDataset sample_hypothesis(const DesignPoints& design, const BumpPair& pair, Hypothesis truth,
                               double sigma, Rng& rng)
{
    auto f = truth == Hypothesis::F1
                 ? TargetFunction::custom([](double) { return 0.0; }, {0.0, 1.0}, 0.0, "f1")
                 : TargetFunction::custom([pair](double x) { return pair.f2(x); }, {0.0, 1.0},
                                          pair.r_q(), "f2");
    return sample_dataset(f, design, sigma, rng);
}

} // namespace robustspline
