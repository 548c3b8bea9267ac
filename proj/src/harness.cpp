#include "robustspline/harness.hpp"

#include "robustspline/error.hpp"
#include "robustspline/lecam.hpp"
#include "robustspline/parallel.hpp"
#include "robustspline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace robustspline {

using nlohmann::json;

ExperimentConfig ExperimentConfig::defaults()
{
    ExperimentConfig c;
    c.attacks = {{AttackKind::Random, {}, {}, {}, {}},
                 {AttackKind::Greedy, {}, {}, {}, {}},
                 {AttackKind::Concentrated, {}, {}, {}, {}}};
    return c;
}

void ExperimentConfig::validate() const
{
    if (n_grid.empty())
        throw ConfigError("n_grid: must not be empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 16)
            throw ConfigError("n_grid[" + std::to_string(i) + "]: each n must be >= 16");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw ConfigError("n_grid: must be strictly increasing");
    }
    if (!(q_exponent >= 0.0 && q_exponent <= 1.0))
        throw ConfigError("q_exponent: must lie in [0, 1]");
    if (!(sigma >= 0.0))
        throw ConfigError("sigma: must be non-negative");
    if (!(bound > 0.0))
        throw ConfigError("M: must be positive");
    if (!(domain.lo < domain.hi))
        throw ConfigError("domain: must satisfy a < b");
    if (trials < 1)
        throw ConfigError("trials: must be >= 1");
    if (metrics.empty())
        throw ConfigError("metrics: must not be empty");
    if (attacks.empty())
        throw ConfigError("attacks: must not be empty");
    for (std::size_t i = 0; i < attacks.size(); ++i) {
        const auto& a = attacks[i];
        const std::string where = "attacks[" + std::to_string(i) + "]";
        if (a.kind == AttackKind::Mixture)
            throw ConfigError(where + ".kind: mixture is only available in the lowerbound command");
        if (a.q_exponent && !(*a.q_exponent >= 0.0 && *a.q_exponent <= 1.0))
            throw ConfigError(where + ".q_exponent: must lie in [0, 1]");
        if (a.bound && !(*a.bound > 0.0))
            throw ConfigError(where + ".M: must be positive");
        if (a.baseline_lambda && !(*a.baseline_lambda > 0.0))
            throw ConfigError(where + ".baseline_lambda: must be positive");
    }
    if (fixed_lambda && !(*fixed_lambda > 0.0))
        throw ConfigError("lambda.value: must be positive");
    if (l2_grid < 64)
        throw ConfigError("grid.l2: must be >= 64");
    if (linf_grid < 1024)
        throw ConfigError("grid.linf: must be >= 1024");
    if (target.kind != "xsinx" && target.kind != "mlp3" && target.kind != "zero" &&
        target.kind != "linear")
        throw ConfigError("target.kind: unknown target '" + target.kind + "'");
}

namespace {

// Thin cursor over a JSON object that remembers its path and rejects keys it
// was never asked about.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(label() + ": expected an object");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    std::optional<T> get(const std::string& key)
    {
        if (!has(key))
            return std::nullopt;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(child(key) + ": wrong type");
        }
    }

    const json& at(const std::string& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string child(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(child(it.key()) + ": unknown key");
    }

private:
    std::string label() const { return path_.empty() ? "config" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class T>
T non_negative_integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(path + ": expected a non-negative integer");
    return static_cast<T>(v.get<unsigned long long>());
}

AttackConfig parse_attack(const json& j, const std::string& path)
{
    AttackConfig a;
    auto kind_of = [&](const std::string& name, const std::string& where) {
        const auto k = parse_attack_kind(name);
        if (!k)
            throw ConfigError(where + ": unknown attack kind '" + name + "'");
        return *k;
    };
    if (j.is_string()) {
        a.kind = kind_of(j.get<std::string>(), path);
        return a;
    }
    Reader r(j, path);
    const auto kind = r.get<std::string>("kind");
    if (!kind)
        throw ConfigError(r.child("kind") + ": required");
    a.kind = kind_of(*kind, r.child("kind"));
    if (r.has("q"))
        a.q = non_negative_integer<std::size_t>(r.at("q"), r.child("q"));
    a.q_exponent = r.get<double>("q_exponent");
    a.bound = r.get<double>("M");
    a.baseline_lambda = r.get<double>("baseline_lambda");
    r.finish();
    return a;
}

} // namespace

ExperimentConfig parse_experiment_config(const json& j)
{
    ExperimentConfig c = ExperimentConfig::defaults();
    Reader r(j, "");

    if (r.has("target")) {
        Reader t(r.at("target"), "target");
        if (auto v = t.get<std::string>("kind"))
            c.target.kind = *v;
        if (t.has("hidden"))
            c.target.hidden = non_negative_integer<std::size_t>(t.at("hidden"), "target.hidden");
        if (t.has("mlp_seed"))
            c.target.mlp_seed = non_negative_integer<std::uint64_t>(t.at("mlp_seed"), "target.mlp_seed");
        if (auto v = t.get<double>("intercept"))
            c.target.intercept = *v;
        if (auto v = t.get<double>("slope"))
            c.target.slope = *v;
        t.finish();
    }
    if (r.has("design")) {
        Reader d(r.at("design"), "design");
        if (auto v = d.get<std::string>("kind")) {
            if (*v == "uniform")
                c.design = DesignKind::UniformQuantile;
            else if (*v == "gaussian")
                c.design = DesignKind::GaussianQuantile;
            else
                throw ConfigError("design.kind: unknown design '" + *v + "'");
        }
        c.design_mean = d.get<double>("mean");
        c.design_sd = d.get<double>("sd");
        d.finish();
    }
    if (r.has("domain")) {
        const auto& d = r.at("domain");
        if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
            throw ConfigError("domain: expected [a, b]");
        c.domain = {d[0].get<double>(), d[1].get<double>()};
    }
    if (auto v = r.get<double>("sigma"))
        c.sigma = *v;
    if (auto v = r.get<double>("M"))
        c.bound = *v;
    if (auto v = r.get<double>("q_exponent"))
        c.q_exponent = *v;
    if (r.has("n_grid")) {
        const auto& g = r.at("n_grid");
        if (!g.is_array())
            throw ConfigError("n_grid: expected an array");
        c.n_grid.clear();
        for (std::size_t i = 0; i < g.size(); ++i)
            c.n_grid.push_back(non_negative_integer<std::size_t>(g[i], "n_grid[" + std::to_string(i) + "]"));
    }
    if (r.has("metrics")) {
        const auto& m = r.at("metrics");
        if (!m.is_array())
            throw ConfigError("metrics: expected an array");
        c.metrics.clear();
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string where = "metrics[" + std::to_string(i) + "]";
            if (!m[i].is_string())
                throw ConfigError(where + ": expected a string");
            const auto met = parse_metric(m[i].get<std::string>());
            if (!met)
                throw ConfigError(where + ": unknown metric '" + m[i].get<std::string>() + "'");
            c.metrics.push_back(*met);
        }
    }
    if (r.has("attacks")) {
        const auto& a = r.at("attacks");
        if (!a.is_array())
            throw ConfigError("attacks: expected an array");
        c.attacks.clear();
        for (std::size_t i = 0; i < a.size(); ++i)
            c.attacks.push_back(parse_attack(a[i], "attacks[" + std::to_string(i) + "]"));
    }
    if (auto v = r.get<bool>("max_over_set"))
        c.max_over_set = *v;
    if (r.has("trials"))
        c.trials = non_negative_integer<std::size_t>(r.at("trials"), "trials");
    if (r.has("master_seed"))
        c.master_seed = non_negative_integer<std::uint64_t>(r.at("master_seed"), "master_seed");
    if (r.has("lambda")) {
        Reader l(r.at("lambda"), "lambda");
        const auto policy = l.get<std::string>("policy").value_or("schedule");
        if (policy == "fixed") {
            c.fixed_lambda = l.get<double>("value");
            if (!c.fixed_lambda)
                throw ConfigError("lambda.value: required for the fixed policy");
        } else if (policy != "schedule") {
            throw ConfigError("lambda.policy: expected 'schedule' or 'fixed'");
        }
        l.finish();
    }
    if (r.has("grid")) {
        Reader g(r.at("grid"), "grid");
        if (g.has("l2"))
            c.l2_grid = non_negative_integer<std::size_t>(g.at("l2"), "grid.l2");
        if (g.has("linf"))
            c.linf_grid = non_negative_integer<std::size_t>(g.at("linf"), "grid.linf");
        g.finish();
    }
    if (auto v = r.get<bool>("self_test"))
        c.self_test = *v;
    if (r.has("output")) {
        Reader o(r.at("output"), "output");
        if (auto v = o.get<std::string>("path"))
            c.output_path = *v;
        if (auto v = o.get<std::string>("format")) {
            if (*v == "csv")
                c.format = OutputFormat::Csv;
            else if (*v == "json")
                c.format = OutputFormat::Json;
            else
                throw ConfigError("output.format: expected 'csv' or 'json'");
        }
        o.finish();
    }
    r.finish();
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_experiment_config(j);
}

TargetFunction make_target(const TargetConfig& cfg, Interval domain)
{
    if (cfg.kind == "xsinx")
        return TargetFunction::x_sin_x(domain);
    if (cfg.kind == "mlp3")
        return TargetFunction::mlp3(MLP3Params::random(cfg.hidden, cfg.mlp_seed), domain);
    if (cfg.kind == "zero")
        return TargetFunction::zero(domain);
    if (cfg.kind == "linear")
        return TargetFunction::linear(cfg.intercept, cfg.slope, domain);
    throw ConfigError("target.kind: unknown target '" + cfg.kind + "'");
}

std::size_t budget_for(std::size_t n, double beta)
{
    // Guard against pow() landing a hair above an exact integer.
    const double raw = std::pow(static_cast<double>(n), beta);
    const double q = std::ceil(raw - 1e-9 * raw);
    return std::min(n, static_cast<std::size_t>(q));
}

std::optional<RateFit> fit_rate(const std::vector<RatePoint>& points)
{
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        if (p.risk > 0.0 && p.n > 0) {
            lx.push_back(std::log(static_cast<double>(p.n)));
            ly.push_back(std::log(p.risk));
        }
    }
    if (lx.size() < 4)
        return std::nullopt;
    const auto line = least_squares_line(lx, ly);
    return RateFit{line.slope, line.intercept, line.r_squared, points};
}

ConvergenceResult run_convergence(const ExperimentConfig& config, unsigned threads)
{
    config.validate();
    const auto target = make_target(config.target, config.domain);
    RiskOptions options;
    options.l2_grid = config.l2_grid;
    options.linf_grid = config.linf_grid;
    options.threads = threads;

    const bool with_max = config.max_over_set && config.attacks.size() > 1;
    std::vector<std::string> labels;
    for (const auto& a : config.attacks)
        labels.emplace_back(attack_name(a.kind));
    if (with_max)
        labels.emplace_back("max-over-set");

    ConvergenceResult result;
    // series[(metric, label)] → points
    std::map<std::pair<std::string, std::string>, std::vector<RatePoint>> series;

    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        const std::size_t n = config.n_grid[ni];
        DesignSpec spec;
        spec.kind = config.design;
        spec.n = n;
        spec.domain = config.domain;
        spec.mean = config.design_mean;
        spec.sd = config.design_sd;
        const auto design = generate_design(spec);
        const std::size_t q = budget_for(n, config.q_exponent);

        std::vector<AttackSpec> attacks;
        for (const auto& a : config.attacks) {
            AttackSpec s;
            s.kind = a.kind;
            s.q = a.q ? std::min(*a.q, n) : a.q_exponent ? budget_for(n, *a.q_exponent) : q;
            s.bound = a.bound.value_or(config.bound);
            s.baseline_lambda = a.baseline_lambda;
            attacks.push_back(s);
        }

        for (const Metric metric : config.metrics) {
            const double lambda = config.fixed_lambda.value_or(lambda_schedule(metric, n, q));
            const Metric one[] = {metric};
            // Same clean data for every metric and attack at this n.
            const std::uint64_t cell_seed = derive_seed(config.master_seed, n);
            const auto outcomes = simulate_trials(target, design, config.sigma, attacks, one,
                                                  lambda, config.trials, cell_seed, options);

            std::vector<std::vector<double>> per_attack(attacks.size(),
                                                        std::vector<double>(config.trials));
            std::vector<double> maxima(config.trials);
            std::vector<std::string> who(config.trials);
            for (std::size_t t = 0; t < config.trials; ++t) {
                std::size_t arg = 0;
                for (std::size_t a = 0; a < attacks.size(); ++a) {
                    per_attack[a][t] = outcomes[t].distance[a][0];
                    if (per_attack[a][t] > per_attack[arg][t])
                        arg = a;
                }
                maxima[t] = per_attack[arg][t];
                who[t] = attack_name(attacks[arg].kind);
            }

            std::vector<RiskEstimate> estimates;
            for (std::size_t a = 0; a < attacks.size(); ++a)
                estimates.push_back(summarize(metric, labels[a], per_attack[a]));
            if (with_max)
                estimates.push_back(summarize(metric, "max-over-set", maxima, who));

            if (config.self_test) {
                for (std::size_t t = 0; t < config.trials; ++t) {
                    for (std::size_t a = 0; a < attacks.size(); ++a) {
                        if (!(per_attack[a][t] >= 0.0))
                            throw NumericalError("self-test: negative squared distance");
                        if (maxima[t] < per_attack[a][t])
                            throw NumericalError("self-test: max-over-set below a member attack");
                    }
                }
            }

            for (std::size_t k = 0; k < estimates.size(); ++k) {
                const auto& e = estimates[k];
                const std::size_t row_q = k < attacks.size() ? attacks[k].q : q;
                result.rows.push_back({metric_name(metric), n, row_q, lambda, e.attack, e.mean,
                                       e.stderr_, e.trials, config.master_seed});
                series[{metric_name(metric), e.attack}].push_back({n, e.mean});
            }
        }
    }

    for (const Metric metric : config.metrics) {
        for (const auto& label : labels) {
            RateFitEntry entry{metric_name(metric), label, std::nullopt, ""};
            const auto& pts = series[{entry.metric, label}];
            entry.fit = fit_rate(pts);
            if (!entry.fit)
                entry.note = "rate fit needs at least 4 grid points with positive risk";
            result.fits.push_back(std::move(entry));
        }
    }
    return result;
}

IndistinguishabilityResult mixture_indistinguishability(std::size_t n, std::size_t q, double sigma,
                                                        std::size_t reps, std::uint64_t seed,
                                                        unsigned threads)
{
    if (reps < 1)
        throw InputError("indistinguishability test needs at least one replication");
    const auto design = lower_bound_design(n);
    const BumpPair pair(q, n);
    const MixtureAdversary adversary(design, pair, sigma);
    const std::size_t eligible = adversary.eligible();

    // samples[h][i][rep]
    std::vector<std::vector<std::vector<double>>> samples(
        2, std::vector<std::vector<double>>(eligible, std::vector<double>(reps)));
    parallel_for(2 * reps, threads, [&](std::size_t cell) {
        const std::size_t h = cell / reps;
        const std::size_t rep = cell % reps;
        const auto truth = h == 0 ? Hypothesis::F1 : Hypothesis::F2;
        Rng rng = make_rng(seed, h, rep);
        const auto clean = sample_hypothesis(design, pair, truth, sigma, rng);
        const auto attacked = adversary.apply(clean, truth, rng);
        for (std::size_t i = 0; i < eligible; ++i)
            samples[h][i][rep] = attacked.y_tilde[i];
    });

    IndistinguishabilityResult r;
    r.critical = ks_critical_1pct(reps, reps);
    std::size_t passed = 0;
    for (std::size_t i = 0; i < eligible; ++i) {
        const double d = ks_two_sample(samples[0][i], samples[1][i]);
        r.ks.push_back(d);
        r.max_ks = std::max(r.max_ks, d);
        if (d < r.critical)
            ++passed;
    }
    r.pass_fraction = eligible ? static_cast<double>(passed) / static_cast<double>(eligible) : 1.0;
    return r;
}

std::vector<LowerBoundRow> run_lowerbound(const std::vector<std::size_t>& q_list, std::size_t n,
                                          double sigma, std::size_t reps, std::uint64_t seed,
                                          unsigned threads)
{
    if (q_list.empty())
        throw InputError("lowerbound needs at least one q");
    std::vector<LowerBoundRow> rows;
    for (std::size_t k = 0; k < q_list.size(); ++k) {
        const std::size_t q = q_list[k];
        const BumpPair pair(q, n);
        LowerBoundRow row;
        row.q = q;
        row.n = n;
        row.r_q = pair.r_q();
        row.l2_gap_squared = l2_gap_squared(pair);
        row.linf_gap = linf_gap(pair);
        row.lecam_bound = lecam_lower_bound(row.l2_gap_squared, 0.0);
        if (reps > 0) {
            const auto ind =
                mixture_indistinguishability(n, q, sigma, reps, derive_seed(seed, q), threads);
            row.max_ks = ind.max_ks;
            row.ks_critical = ind.critical;
            row.eligible = ind.ks.size();
            row.pass_fraction = ind.pass_fraction;
        }
        rows.push_back(row);
    }
    return rows;
}

KernelGrid run_kernel_dump(const KernelDumpConfig& cfg, unsigned threads)
{
    DesignSpec spec;
    spec.kind = cfg.design;
    spec.n = cfg.n;
    spec.domain = cfg.domain;
    const auto design = generate_design(spec);
    const double lambda = cfg.lambda.value_or(std::pow(static_cast<double>(cfg.n), -0.8));
    const auto density = cfg.design == DesignKind::GaussianQuantile
                             ? DensityModel::truncated_gaussian(spec.gaussian_mean(),
                                                                spec.gaussian_sd(), cfg.domain)
                             : DensityModel::uniform(cfg.domain);
    return kernel_grid(design, SmoothingParams(lambda), density,
                       cfg.interior.value_or(default_interior(cfg.domain)), cfg.grid_size, threads);
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* const risk_csv_header = "metric,n,q,lambda,attack,mean,stderr,trials,seed";
const char* const lowerbound_csv_header =
    "q,n,r_q,l2_gap_squared,linf_gap,lecam_bound,max_ks,ks_critical,eligible,pass_fraction";
const char* const kernel_csv_header = "x,s,j,W_n,W_hat,abs_diff";

void write_risk_csv(std::ostream& os, const std::vector<RiskRow>& rows)
{
    os << risk_csv_header << '\n';
    for (const auto& r : rows)
        os << r.metric << ',' << r.n << ',' << r.q << ',' << format_double(r.lambda) << ','
           << r.attack << ',' << format_double(r.mean) << ',' << format_double(r.stderr_) << ','
           << r.trials << ',' << r.seed << '\n';
}

json to_json(const ConvergenceResult& result, const ExperimentConfig& config)
{
    json rows = json::array();
    for (const auto& r : result.rows)
        rows.push_back({{"metric", r.metric}, {"n", r.n}, {"q", r.q}, {"lambda", r.lambda},
                        {"attack", r.attack}, {"mean", r.mean}, {"stderr", r.stderr_},
                        {"trials", r.trials}, {"seed", r.seed}});
    json fits = json::array();
    for (const auto& f : result.fits) {
        json e = {{"metric", f.metric}, {"attack", f.attack}};
        if (f.fit) {
            e["slope"] = f.fit->slope;
            e["intercept"] = f.fit->intercept;
            e["r_squared"] = f.fit->r_squared;
            json pts = json::array();
            for (const auto& p : f.fit->points)
                pts.push_back({{"n", p.n}, {"risk", p.risk}});
            e["points"] = pts;
        } else {
            e["slope"] = nullptr;
            e["note"] = f.note;
        }
        fits.push_back(e);
    }
    return {{"rows", rows},
            {"fits", fits},
            {"metadata",
             {{"target", config.target.kind},
              {"q_exponent", config.q_exponent},
              {"sigma", config.sigma},
              {"M", config.bound},
              {"trials", config.trials},
              {"master_seed", config.master_seed},
              {"lambda_policy", config.fixed_lambda ? "fixed" : "schedule"},
              {"sup_note", "max-over-set is the per-trial max over the implemented attacks; "
                           "it lower-bounds the supremum over all adversaries"}}}};
}

void write_lowerbound_csv(std::ostream& os, const std::vector<LowerBoundRow>& rows)
{
    os << lowerbound_csv_header << '\n';
    for (const auto& r : rows)
        os << r.q << ',' << r.n << ',' << format_double(r.r_q) << ','
           << format_double(r.l2_gap_squared) << ',' << format_double(r.linf_gap) << ','
           << format_double(r.lecam_bound) << ',' << format_double(r.max_ks) << ','
           << format_double(r.ks_critical) << ',' << r.eligible << ','
           << format_double(r.pass_fraction) << '\n';
}

json to_json(const std::vector<LowerBoundRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"q", r.q}, {"n", r.n}, {"r_q", r.r_q},
                       {"l2_gap_squared", r.l2_gap_squared}, {"linf_gap", r.linf_gap},
                       {"lecam_bound", r.lecam_bound}, {"max_ks", r.max_ks},
                       {"ks_critical", r.ks_critical}, {"eligible", r.eligible},
                       {"pass_fraction", r.pass_fraction}});
    return out;
}

void write_kernel_csv(std::ostream& os, const KernelGrid& grid)
{
    os << kernel_csv_header << '\n';
    for (const auto& r : grid.rows)
        os << format_double(r.x) << ',' << format_double(r.s) << ',' << r.j << ','
           << format_double(r.weight) << ',' << format_double(r.kernel) << ','
           << format_double(r.abs_diff) << '\n';
}

json to_json(const KernelApproxResult& s)
{
    return {{"sup_abs_error", s.sup_abs_error}, {"sup_abs_kernel", s.sup_abs_kernel},
            {"relative_error", s.relative_error}, {"columns", s.columns},
            {"x_points", s.x_points}, {"warnings", s.warnings}};
}

} // namespace robustspline
