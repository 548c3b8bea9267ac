#include "robustspline/risk.hpp"

#include "robustspline/error.hpp"
#include "robustspline/parallel.hpp"
#include "robustspline/rng.hpp"
#include "robustspline/simd/kernels.hpp"
#include "robustspline/stats.hpp"

#include <algorithm>
#include <cmath>

namespace robustspline {

BatchFunction batch(std::function<double(double)> f)
{
    return [f = std::move(f)](std::span<const double> x, std::span<double> out) {
        for (std::size_t k = 0; k < x.size(); ++k)
            out[k] = f(x[k]);
    };
}

BatchFunction batch(const NaturalCubicSpline& spline)
{
    return [&spline](std::span<const double> x, std::span<double> out) {
        spline.evaluate_sorted(x, out);
    };
}

namespace {

void uniform_grid(Interval d, std::size_t panels, std::vector<double>& x)
{
    x.resize(panels + 1);
    for (std::size_t k = 0; k <= panels; ++k)
        x[k] = d.lo + d.length() * static_cast<double>(k) / static_cast<double>(panels);
    x[panels] = d.hi;
}

void check_finite(std::span<const double> v)
{
    for (double e : v)
        if (!std::isfinite(e))
            throw InputError("function evaluation is not finite");
}

double simpson_sq_diff(const BatchFunction& f, const BatchFunction& g, Interval d,
                       std::size_t panels)
{
    std::vector<double> x, fx, gx, w;
    uniform_grid(d, panels, x);
    fx.resize(x.size());
    gx.resize(x.size());
    f(x, fx);
    g(x, gx);
    check_finite(fx);
    check_finite(gx);
    const double h = d.length() / static_cast<double>(panels);
    w.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        w[k] = (k == 0 || k == panels) ? h / 3.0 : (k % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    return simd::weighted_sq_diff(w, fx, gx);
}

} // namespace

double l2_distance_squared(const BatchFunction& f, const BatchFunction& g, Interval domain,
                           std::size_t grid_size)
{
    if (grid_size < 64)
        throw InputError("L2 grid needs at least 64 panels");
    if (!(domain.lo < domain.hi))
        throw InputError("L2 domain must satisfy a < b");
    constexpr std::size_t cap = std::size_t{1} << 20;
    std::size_t panels = grid_size + (grid_size % 2);
    double prev = simpson_sq_diff(f, g, domain, panels);
    while (panels < cap) {
        panels *= 2;
        const double cur = simpson_sq_diff(f, g, domain, panels);
        const double change = std::abs(cur - prev);
        prev = cur;
        if (change <= 1e-6 * std::abs(cur) || change <= 1e-300)
            break;
    }
    return prev;
}

double l2_distance_squared(const std::function<double(double)>& f,
                           const std::function<double(double)>& g, Interval domain,
                           std::size_t grid_size)
{
    return l2_distance_squared(batch(f), batch(g), domain, grid_size);
}

LinfResult linf_distance(const BatchFunction& f, const BatchFunction& g, Interval domain,
                         std::size_t grid_size)
{
    if (grid_size < 1024)
        throw InputError("L-infinity grid needs at least 1024 points");
    if (!(domain.lo < domain.hi))
        throw InputError("L-infinity domain must satisfy a < b");
    std::vector<double> x, fx(grid_size), gx(grid_size);
    uniform_grid(domain, grid_size - 1, x);
    f(x, fx);
    g(x, gx);
    check_finite(fx);
    check_finite(gx);
    const auto top = simd::max_abs_diff(fx, gx);

    LinfResult best{top.value, x[top.index]};
    auto gap = [&](double t) {
        double a = 0.0, b = 0.0;
        f(std::span<const double>(&t, 1), std::span<double>(&a, 1));
        g(std::span<const double>(&t, 1), std::span<double>(&b, 1));
        return std::abs(a - b);
    };

    // Golden-section on the bracketing cells.
    double lo = x[top.index == 0 ? 0 : top.index - 1];
    double hi = x[std::min(top.index + 1, grid_size - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = gap(c), fd = gap(d);
    while (hi - lo > 1e-8) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = gap(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = gap(d);
        }
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = gap(mid);
    if (fm > best.value)
        best = {fm, mid};
    return best;
}

LinfResult linf_distance(const std::function<double(double)>& f,
                         const std::function<double(double)>& g, Interval domain,
                         std::size_t grid_size)
{
    return linf_distance(batch(f), batch(g), domain, grid_size);
}

const char* metric_name(Metric m) { return m == Metric::R2 ? "R2" : "Rinf"; }

std::optional<Metric> parse_metric(const std::string& name)
{
    if (name == "R2")
        return Metric::R2;
    if (name == "Rinf")
        return Metric::Rinf;
    return std::nullopt;
}

double lambda_schedule(Metric metric, std::size_t n, std::size_t q)
{
    if (n == 0 || q > n)
        throw InputError("lambda schedule needs 0 <= q <= n and n > 0");
    const double nn = static_cast<double>(n);
    const double qq = static_cast<double>(q);
    const double threshold_exp = metric == Metric::R2 ? 0.4 : 0.5;
    const double corrupted_exp = metric == Metric::R2 ? 4.0 / 3.0 : 6.0 / 5.0;
    // A q that sits on the threshold up to round-off takes the corrupted branch.
    const bool corrupted = q > 0 && qq >= std::pow(nn, threshold_exp) * (1.0 - 1e-12);
    return corrupted ? std::pow(qq / nn, corrupted_exp) : std::pow(nn, -0.8);
}

double squared_distance(Metric metric, const TargetFunction& target,
                        const NaturalCubicSpline& fitted, Interval domain,
                        const RiskOptions& options)
{
    const auto f = batch(target.function());
    const auto g = batch(fitted);
    if (metric == Metric::R2)
        return l2_distance_squared(f, g, domain, options.l2_grid);
    const double v = linf_distance(f, g, domain, options.linf_grid).value;
    return v * v;
}

CorruptedDataset apply_attack(const AttackSpec& spec, const CleanDataset& ds, double fit_lambda,
                              Rng& rng)
{
    switch (spec.kind) {
    case AttackKind::Random:
        return random_attack(ds, spec.q, spec.bound, rng);
    case AttackKind::Greedy:
        return greedy_attack(ds, spec.q, spec.bound, spec.baseline_lambda.value_or(fit_lambda));
    case AttackKind::Concentrated:
        return concentrated_attack(ds, spec.q, spec.bound);
    case AttackKind::Mixture:
        break;
    }
    throw InputError("the mixture attack is only defined on the lower-bound construction");
}

namespace {
constexpr std::uint64_t noise_stream = 0x6e6f697365ULL;
}

std::vector<TrialOutcome> simulate_trials(const TargetFunction& target, const DesignPoints& design,
                                          double sigma, std::span<const AttackSpec> attacks,
                                          std::span<const Metric> metrics, double lambda,
                                          std::size_t trials, std::uint64_t master_seed,
                                          const RiskOptions& options)
{
    if (trials == 0)
        throw InputError("risk estimation needs at least one trial");
    if (attacks.empty() || metrics.empty())
        throw InputError("risk estimation needs at least one attack and one metric");
    const SmoothingParams params(lambda);
    std::vector<TrialOutcome> out(trials);
    parallel_for(trials, options.threads, [&](std::size_t t) {
        Rng noise = make_rng(master_seed, noise_stream, t);
        const auto clean = sample_dataset(target, design, sigma, noise);
        TrialOutcome& o = out[t];
        o.distance.assign(attacks.size(), std::vector<double>(metrics.size(), 0.0));
        for (std::size_t a = 0; a < attacks.size(); ++a) {
            Rng arng = make_rng(master_seed, a, t);
            const auto corrupted = apply_attack(attacks[a], clean, lambda, arng);
            const auto fitted = fit(design, corrupted.y_tilde, params);
            for (std::size_t m = 0; m < metrics.size(); ++m)
                o.distance[a][m] =
                    squared_distance(metrics[m], target, fitted, target.domain(), options);
        }
    });
    return out;
}

RiskEstimate summarize(Metric metric, std::string attack, std::vector<double> per_trial,
                       std::vector<std::string> attained_by)
{
    const auto ms = mean_stderr(per_trial);
    RiskEstimate r;
    r.metric = metric;
    r.mean = ms.mean;
    r.stderr_ = ms.stderr_;
    r.trials = per_trial.size();
    r.attack = std::move(attack);
    r.per_trial = std::move(per_trial);
    r.attained_by = std::move(attained_by);
    return r;
}

RiskEstimate estimate_risk(Metric metric, const TargetFunction& target, const DesignPoints& design,
                           double sigma, std::span<const AttackSpec> attacks, double lambda,
                           std::size_t trials, std::uint64_t master_seed,
                           const RiskOptions& options)
{
    const Metric metrics[] = {metric};
    const auto outcomes =
        simulate_trials(target, design, sigma, attacks, metrics, lambda, trials, master_seed, options);
    std::vector<double> values(trials);
    std::vector<std::string> who;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t arg = 0;
        for (std::size_t a = 1; a < attacks.size(); ++a)
            if (outcomes[t].distance[a][0] > outcomes[t].distance[arg][0])
                arg = a;
        values[t] = outcomes[t].distance[arg][0];
        if (attacks.size() > 1)
            who.emplace_back(attack_name(attacks[arg].kind));
    }
    const std::string label = attacks.size() > 1 ? "max-over-set" : attack_name(attacks[0].kind);
    return summarize(metric, label, std::move(values), std::move(who));
}

} // namespace robustspline
