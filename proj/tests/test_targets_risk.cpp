#include "robustspline/density.hpp"
#include "robustspline/error.hpp"
#include "robustspline/smoother.hpp"
#include "robustspline/parallel.hpp"
#include "robustspline/quadrature.hpp"
#include "robustspline/risk.hpp"
#include "robustspline/rng.hpp"
#include "robustspline/stats.hpp"
#include "robustspline/targets.hpp"

#include "doctest.h"

#include <atomic>
#include <cmath>
#include <stdexcept>

using namespace robustspline;

TEST_CASE("uniform quantile design")
{
    DesignSpec spec;
    spec.n = 4;
    spec.domain = {0.0, 1.0};
    const auto d = generate_design(spec);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(d[i] == doctest::Approx((i + 1) / 5.0));
    spec.domain = {-10.0, 10.0};
    spec.n = 3;
    const auto e = generate_design(spec);
    CHECK(e[0] == doctest::Approx(-5.0));
    CHECK(e[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(e[2] == doctest::Approx(5.0));
}

TEST_CASE("gaussian quantile design is symmetric and denser at the centre")
{
    DesignSpec spec;
    spec.kind = DesignKind::GaussianQuantile;
    spec.n = 101;
    spec.domain = {-1.0, 1.0};
    const auto d = generate_design(spec);
    for (std::size_t i = 0; i < 101; ++i)
        CHECK(d[i] == doctest::Approx(-d[100 - i]).scale(1.0).epsilon(1e-10));
    CHECK(d.spacing(50) < d.spacing(0));
    CHECK(d[50] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    spec.n = 100;
    const auto g = generate_design(spec);
    const auto dens = DensityModel::truncated_gaussian(spec.gaussian_mean(), spec.gaussian_sd(), spec.domain);
    CHECK(cdf_discrepancy(g, dens) <= 2.0 / 101.0);
    spec.kind = DesignKind::Explicit;
    spec.points = {0.5, 0.1, 0.7};
    CHECK_THROWS_AS(generate_design(spec), DesignError);
}

TEST_CASE("x sin x target and bound")
{
    const auto f = TargetFunction::x_sin_x();
    CHECK(f(2.0) == doctest::Approx(2.0 * std::sin(2.0)));
    CHECK(f.bound() == 10.0);
    for (double x = -10.0; x <= 10.0; x += 0.01)
        CHECK(std::abs(f(x)) <= f.bound());
    CHECK(f.name() == "xsinx");
}

TEST_CASE("mlp forward pass against a direct implementation")
{
    CHECK(mlp_forward(MLP3Params::constant(4, 0.0), 0.7) == 0.0);
    auto unit = MLP3Params::constant(1, 1.0);
    unit.b1 = {0.0};
    unit.b2 = {0.0};
    unit.b3 = 0.0;
    CHECK(mlp_forward(unit, 0.4) == doctest::Approx(std::tanh(std::tanh(0.4))).epsilon(1e-15));

    const auto p = MLP3Params::random(8, 2024);
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        std::vector<double> h1(8), h2(8);
        for (int i = 0; i < 8; ++i)
            h1[i] = std::tanh(p.w1[i] * x + p.b1[i]);
        double out = p.b3;
        for (int i = 0; i < 8; ++i) {
            double z = p.b2[i];
            for (int k = 0; k < 8; ++k)
                z += p.w2[i * 8 + k] * h1[k];
            h2[i] = std::tanh(z);
            out += p.w3[i] * h2[i];
        }
        CHECK(std::abs(mlp_forward(p, x) - out) <= 1e-12);
    }
}

TEST_CASE("mlp target")
{
    const auto one = MLP3Params::constant(2, 1.0);
    // h1 = tanh(x + 1), h2 = tanh(2 h1 + 1), out = 2 h2 + 1.
    const double x = 0.3;
    const double h1 = std::tanh(x + 1.0);
    const double h2 = std::tanh(2.0 * h1 + 1.0);
    CHECK(mlp_forward(one, x) == doctest::Approx(2.0 * h2 + 1.0));

    const auto p = MLP3Params::random(32, 9);
    const auto q = MLP3Params::random(32, 9);
    CHECK(p.w2 == q.w2);
    CHECK(p.w2.size() == 32 * 32);
    for (double w : p.w2)
        CHECK(std::abs(w) <= 1.0);
    const auto f = TargetFunction::mlp3(p);
    CHECK(f.bound() == 33.0);
    for (double t = -10.0; t <= 10.0; t += 0.5)
        CHECK(std::abs(f(t)) <= f.bound());
    auto bad = p;
    bad.w1.pop_back();
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("noise is reproducible and has the right moments")
{
    DesignSpec spec;
    spec.n = 20000;
    const auto d = generate_design(spec);
    const auto zero = TargetFunction::zero();
    Rng a = make_rng(5, 1), b = make_rng(5, 1);
    const auto s1 = sample_dataset(zero, d, 2.0, a);
    const auto s2 = sample_dataset(zero, d, 2.0, b);
    CHECK(s1.y == s2.y);
    const auto ms = mean_stderr(s1.y);
    CHECK(std::abs(ms.mean) < 4 * 2.0 / std::sqrt(20000.0));
    double ss = 0.0;
    for (double v : s1.y)
        ss += v * v;
    CHECK(ss / 20000.0 == doctest::Approx(4.0).epsilon(0.05));
    Rng z = make_rng(5, 2);
    const auto noiseless = sample_dataset(TargetFunction::x_sin_x({0.0, 1.0}), d, 0.0, z);
    for (std::size_t i = 0; i < d.size(); i += 97)
        CHECK(noiseless.y[i] == d[i] * std::sin(d[i]));
    Rng c = make_rng(5, 1);
    CHECK_THROWS_AS(sample_dataset(zero, d, -1.0, c), InputError);
}

TEST_CASE("derived seeds differ across streams and counters")
{
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("parallel_for visits each index once and rethrows")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7)
                            throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    CHECK(resolve_threads(3) == 3);
}

TEST_CASE("adaptive simpson")
{
    const auto r = adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    const auto kink = adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-10);
    CHECK(kink.value == doctest::Approx(0.045 + 0.245).epsilon(1e-9));
    CHECK_THROWS_AS(adaptive_simpson([](double) { return NAN; }, 0.0, 1.0), NumericalError);
}

TEST_CASE("statistics helpers")
{
    const std::vector<double> v{1, 2, 3, 4};
    const auto ms = mean_stderr(v);
    CHECK(ms.mean == 2.5);
    CHECK(ms.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(mean_stderr(std::vector<double>{3.0}).stderr_ == 0.0);
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
    CHECK(ks_critical_1pct(100) == doctest::Approx(0.163));
    CHECK(ks_critical_1pct(100, 100) == doctest::Approx(1.63 * std::sqrt(0.02)));
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto l = least_squares_line(x, y);
    CHECK(l.slope == doctest::Approx(2.0));
    CHECK(l.intercept == doctest::Approx(1.0));
    CHECK(l.r_squared == doctest::Approx(1.0));
}

TEST_CASE("L2 distance by Simpson")
{
    const Interval unit{0.0, 1.0};
    const auto zero = [](double) { return 0.0; };
    CHECK(l2_distance_squared([](double x) { return std::sin(M_PI * x); }, zero, unit) ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(l2_distance_squared([](double) { return 3.0; }, zero, {-1.0, 1.0}) ==
          doctest::Approx(18.0).epsilon(1e-12));
    CHECK(l2_distance_squared(zero, zero, unit) == 0.0);
    CHECK_THROWS_AS(l2_distance_squared(zero, zero, unit, 10), InputError);
}

TEST_CASE("L-infinity distance with refinement")
{
    const Interval unit{0.0, 1.0};
    const auto zero = [](double) { return 0.0; };
    const auto r = linf_distance([](double x) { return std::sin(3 * M_PI * x); }, zero, unit);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto off = linf_distance([](double x) { return 1.0 - std::pow(x - 0.123456789, 2); },
                                   zero, unit, 1024);
    CHECK(off.argmax == doctest::Approx(0.123456789).epsilon(1e-7));
    CHECK(off.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("smoothing parameter schedule")
{
    const double n = 1000.0;
    // q < n^0.4 ≈ 15.8
    CHECK(lambda_schedule(Metric::R2, 1000, 15) == doctest::Approx(std::pow(n, -0.8)));
    CHECK(lambda_schedule(Metric::R2, 1000, 16) == doctest::Approx(std::pow(16 / n, 4.0 / 3.0)));
    // q < n^0.5 ≈ 31.6
    CHECK(lambda_schedule(Metric::Rinf, 1000, 31) == doctest::Approx(std::pow(n, -0.8)));
    CHECK(lambda_schedule(Metric::Rinf, 1000, 32) == doctest::Approx(std::pow(32 / n, 1.2)));
    // Exactly at the threshold the corrupted branch applies.
    CHECK(lambda_schedule(Metric::Rinf, 10000, 100) == doctest::Approx(std::pow(0.01, 1.2)));
    CHECK(parse_metric("R2") == Metric::R2);
    CHECK(parse_metric("Rinf") == Metric::Rinf);
    CHECK_FALSE(parse_metric("L1"));
}

TEST_CASE("risk estimation is deterministic across thread counts")
{
    DesignSpec spec;
    spec.n = 256;
    spec.domain = {-10.0, 10.0};
    const auto d = generate_design(spec);
    const auto f = TargetFunction::x_sin_x();
    std::vector<AttackSpec> attacks(3);
    attacks[0].kind = AttackKind::Random;
    attacks[1].kind = AttackKind::Greedy;
    attacks[2].kind = AttackKind::Concentrated;
    for (auto& a : attacks)
        a.q = 6;
    const double lam = lambda_schedule(Metric::R2, 256, 6);
    RiskOptions one, four;
    four.threads = 4;
    const auto e1 = estimate_risk(Metric::R2, f, d, 1.0, attacks, lam, 6, 42, one);
    const auto e4 = estimate_risk(Metric::R2, f, d, 1.0, attacks, lam, 6, 42, four);
    CHECK(e1.per_trial == e4.per_trial);
    CHECK(e1.attack == "max-over-set");
    CHECK(e1.attained_by.size() == 6);

    // The max over the set dominates each member in every trial.
    for (std::size_t a = 0; a < 3; ++a) {
        const auto single = estimate_risk(Metric::R2, f, d, 1.0,
                                          std::span<const AttackSpec>(&attacks[a], 1), lam, 6, 42, one);
        for (std::size_t t = 0; t < 6; ++t)
            CHECK(e1.per_trial[t] >= single.per_trial[t]);
    }

    // q = 0 with any attack is the clean fit.
    AttackSpec none;
    none.q = 0;
    const auto clean = estimate_risk(Metric::R2, f, d, 1.0, std::span<const AttackSpec>(&none, 1),
                                     lam, 6, 42, one);
    for (std::size_t t = 0; t < 6; ++t)
        CHECK(clean.per_trial[t] <= e1.per_trial[t]);

    AttackSpec mix;
    mix.kind = AttackKind::Mixture;
    mix.q = 2;
    CHECK_THROWS_AS(estimate_risk(Metric::R2, f, d, 1.0, std::span<const AttackSpec>(&mix, 1), lam,
                                  2, 42, one),
                    InputError);
}
