#include "oracles.hpp"

#include "robustspline/adversary.hpp"
#include "robustspline/error.hpp"
#include "robustspline/lecam.hpp"
#include "robustspline/mixture.hpp"
#include "robustspline/quadrature.hpp"
#include "robustspline/spline.hpp"
#include "robustspline/stats.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

using namespace robustspline;

namespace {

CleanDataset dataset(std::vector<double> y)
{
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        x[i] = static_cast<double>(i + 1) / static_cast<double>(y.size() + 1);
    DesignPoints d(x, {0.0, 1.0});
    return CleanDataset{d, std::move(y), 1.0, TargetFunction::zero()};
}

void check_budget_invariants(const CleanDataset& ds, const CorruptedDataset& c, std::size_t q, double m)
{
    CHECK(c.corrupted.size() <= q);
    CHECK(std::is_sorted(c.corrupted.begin(), c.corrupted.end()));
    std::set<std::size_t> hit(c.corrupted.begin(), c.corrupted.end());
    CHECK(hit.size() == c.corrupted.size());
    for (std::size_t i = 0; i < ds.y.size(); ++i) {
        if (hit.count(i))
            CHECK(std::abs(c.y_tilde[i]) <= m);
        else
            CHECK(c.y_tilde[i] == ds.y[i]);
    }
}

} // namespace

TEST_CASE("random attack corrupts a uniform subset")
{
    const auto ds = dataset(std::vector<double>(50, 0.5));
    Rng rng(17);
    const auto c = random_attack(ds, 7, 100.0, rng);
    CHECK(c.corrupted.size() == 7);
    for (auto i : c.corrupted)
        CHECK(c.y_tilde[i] == 100.0);
    check_budget_invariants(ds, c, 7, 100.0);

    // Each index is equally likely: 4000 draws of q = 5 out of n = 10.
    const auto small = dataset(std::vector<double>(10, 0.0));
    std::vector<int> counts(10, 0);
    Rng r2(5);
    for (int rep = 0; rep < 4000; ++rep)
        for (auto i : random_attack(small, 5, 1.0, r2).corrupted)
            ++counts[i];
    for (int c2 : counts)
        CHECK(std::abs(c2 - 2000) < 200);

    Rng r3(1);
    CHECK(random_attack(ds, 0, 100.0, r3).corrupted.empty());
    CHECK_THROWS_AS(random_attack(ds, 51, 100.0, r3), BudgetError);
    CHECK_THROWS_AS(random_attack(ds, 3, 0.0, r3), InputError);
}

TEST_CASE("concentrated window")
{
    // median rank 6 for n = 10, q = 4 → start rank 4 → indices 3..6.
    CHECK(concentrated_window_start(10, 4) == 3);
    CHECK(concentrated_window_start(11, 3) == 4);
    CHECK(concentrated_window_start(10, 10) == 0);
    CHECK(concentrated_window_start(10, 9) == 1);
    CHECK(concentrated_window_start(10, 0) == 5);
    const auto ds = dataset(std::vector<double>(10, 0.0));
    const auto c = concentrated_attack(ds, 4, 3.0);
    CHECK(c.corrupted == std::vector<std::size_t>{3, 4, 5, 6});
    check_budget_invariants(ds, c, 4, 3.0);
    CHECK_THROWS_AS(concentrated_attack(ds, 11, 3.0), BudgetError);
}

TEST_CASE("greedy attack matches a hand simulation")
{
    const std::vector<double> y{0.0, 2.0, -1.0, 0.5, 3.0, -2.0, 1.0, 0.0};
    const auto ds = dataset(y);
    const double lam = 1e-2;
    const double m = 2.5;
    const auto base = fit(ds.design, y, SmoothingParams(lam));

    std::vector<double> yt = y;
    std::vector<std::size_t> order;
    std::vector<bool> used(y.size(), false);
    std::size_t clamps = 0;
    for (int round = 0; round < 3; ++round) {
        std::size_t best = 0;
        double bl = INFINITY;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double r = std::pow(base.values()[i] - yt[i], 2);
            if (!used[i] && r < bl) {
                bl = r;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        const double v = yt[best] + (base.values()[best] >= yt[best] ? m : -m);
        const double c = std::clamp(v, -m, m);
        clamps += c != v;
        yt[best] = c;
    }
    const auto out = greedy_attack(ds, 3, m, lam);
    CHECK(out.pick_order == order);
    CHECK(out.clamped == clamps);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(out.y_tilde[i] == yt[i]);
    check_budget_invariants(ds, out, 3, m);
}

TEST_CASE("greedy attack ties go to the smallest index and sign(0) is positive")
{
    // Constant data is fitted exactly, so every residual is zero.
    const auto ds = dataset(std::vector<double>(6, 1.0));
    const auto out = greedy_attack(ds, 2, 5.0, 1.0);
    CHECK(out.pick_order == std::vector<std::size_t>{0, 1});
    CHECK(out.y_tilde[0] == 5.0);
    CHECK(out.y_tilde[1] == 5.0);
    CHECK(out.clamped == 1 + 1);
}

TEST_CASE("attack names round-trip")
{
    for (auto k : {AttackKind::Random, AttackKind::Greedy, AttackKind::Concentrated, AttackKind::Mixture})
        CHECK(parse_attack_kind(attack_name(k)) == k);
    CHECK_FALSE(parse_attack_kind("bogus"));
}

TEST_CASE("mixing weight against a Riemann sum and the closed form")
{
    const Gaussian p1{0.0, 1.0}, p2{1.3, 0.7};
    const int steps = 1000000;
    const double lo = -14.0, hi = 15.0, h = (hi - lo) / steps;
    double t = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double x = lo + (k + 0.5) * h;
        t += std::max(0.0, p2.pdf(x) - p1.pdf(x)) * h;
    }
    CHECK(positive_part_mass(p1, p2) == doctest::Approx(t).epsilon(1e-7));
    const double closed = oracle::positive_part_cdf(INFINITY, 0.0, 1.0, 1.3, 0.7);
    CHECK(positive_part_mass(p1, p2) == doctest::Approx(closed).epsilon(1e-9));
    CHECK(mixing_weight(p1, p2) == doctest::Approx(closed / (1 + closed)).epsilon(1e-9));
    CHECK(mixing_weight(p1, p1) == 0.0);
}

TEST_CASE("residual densities satisfy the mixture identity")
{
    const Gaussian p1{-0.4, 1.2}, p2{0.9, 0.8};
    const MixturePair mp = residual_densities(p1, p2, mixing_weight(p1, p2));
    CHECK(mp.alpha() > 0.0);
    CHECK(mp.alpha() < 1.0);
    for (double u = -12.0; u <= 12.0; u += 0.001)
        CHECK(std::abs(mp.mixture1(u) - mp.mixture2(u)) <= 1e-9);
    const auto cuts = oracle::gaussian_crossings(-0.4, 1.2, 0.9, 0.8);
    std::vector<double> edges{-15.0};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(15.0);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        m1 += adaptive_simpson([&](double u) { return mp.q1(u); }, edges[k], edges[k + 1], 1e-12).value;
        m2 += adaptive_simpson([&](double u) { return mp.q2(u); }, edges[k], edges[k + 1], 1e-12).value;
    }
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mp.q1(cuts.empty() ? 0.0 : cuts[0]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("residual samplers follow their densities")
{
    const Gaussian p1{0.0, 1.0}, p2{2.0, 1.0};
    const MixturePair mp = residual_densities(p1, p2, mixing_weight(p1, p2));
    Rng rng(123);
    std::vector<double> s1(20000), s2(20000);
    for (auto& v : s1)
        v = mp.sample_q1(rng);
    for (auto& v : s2)
        v = mp.sample_q2(rng);
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    const double t = oracle::positive_part_cdf(INFINITY, 0, 1, 2, 1);
    const auto f1 = [&](double u) { return oracle::positive_part_cdf(u, 0, 1, 2, 1) / t; };
    const auto f2 = [&](double u) { return oracle::positive_part_cdf(u, 2, 1, 0, 1) / t; };
    CHECK(ks_one_sample(s1, f1) < ks_critical_1pct(s1.size()));
    CHECK(ks_one_sample(s2, f2) < ks_critical_1pct(s2.size()));
    // Q₁ lives where P₂ > P₁, i.e. right of the midpoint 1.
    CHECK(s1.front() >= 1.0);
    CHECK(s2.back() <= 1.0);
}

TEST_CASE("degenerate and invalid mixture pairs")
{
    const Gaussian p{0.3, 1.0};
    const MixturePair same(p, p, 0.0);
    CHECK(same.degenerate());
    CHECK(same.q1(0.1) == doctest::Approx(p.pdf(0.1)));
    CHECK_THROWS_AS(MixturePair(Gaussian{0, 1}, Gaussian{1, 1}, 0.0), LogicError);
}

TEST_CASE("lower-bound design and mixture adversary")
{
    const auto d = lower_bound_design(50);
    CHECK(d.size() == 50);
    CHECK(d[0] == doctest::Approx(0.02));
    CHECK(d[49] == 1.0);
    CHECK_THROWS_AS(lower_bound_design(2), ConstructionError);

    const BumpPair pair(10, 50); // r = 0.2
    const MixtureAdversary adv(d, pair, 1.0);
    CHECK(adv.eligible() == 9);
    Rng rng(3);
    const auto ds = sample_hypothesis(d, pair, Hypothesis::F2, 1.0, rng);
    const auto out = adv.apply(ds, Hypothesis::F2, rng);
    for (std::size_t i = 9; i < 50; ++i)
        CHECK(out.y_tilde[i] == ds.y[i]);
    for (auto i : out.corrupted)
        CHECK(i < 9);

    const DesignPoints other({0.1, 0.2, 0.3}, {0.0, 1.0});
    CHECK_THROWS_AS(MixtureAdversary(other, BumpPair(1, 3), 1.0), ConstructionError);
    CHECK_THROWS_AS(MixtureAdversary(d, pair, 0.0), InputError);
}

TEST_CASE("spline trained on mixture-attacked data stays above the two-point bound")
{
    const std::size_t n = 200, q = 40;
    const auto d = lower_bound_design(n);
    const BumpPair pair(q, n);
    const MixtureAdversary adv(d, pair, 1.0);
    const SmoothingParams p(std::pow(static_cast<double>(q) / n, 4.0 / 3.0));
    const double bound = lecam_lower_bound(l2_gap_squared(pair), 0.0);
    double total = 0.0;
    const int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
        for (auto h : {Hypothesis::F1, Hypothesis::F2}) {
            Rng rng = make_rng(8, h == Hypothesis::F1 ? 0 : 1, static_cast<std::uint64_t>(rep));
            const auto clean = sample_hypothesis(d, pair, h, 1.0, rng);
            const auto attacked = adv.apply(clean, h, rng);
            const auto s = fit(d, attacked.y_tilde, p);
            const int cells = 4000;
            double err = 0.0;
            for (int k = 0; k < cells; ++k) {
                const double x = (k + 0.5) / cells;
                const double truth = h == Hypothesis::F1 ? pair.f1(x) : pair.f2(x);
                err += std::pow(s.evaluate(x) - truth, 2) / cells;
            }
            total += 0.5 * err;
        }
    }
    CHECK(total / reps >= bound);
}
