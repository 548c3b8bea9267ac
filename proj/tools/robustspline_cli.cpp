// Command-line driver: fit, attack, experiment, lowerbound, kernel.

#include "robustspline/adversary.hpp"
#include "robustspline/error.hpp"
#include "robustspline/harness.hpp"
#include "robustspline/lecam.hpp"
#include "robustspline/parallel.hpp"
#include "robustspline/spline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace robustspline;
using nlohmann::json;

namespace {

enum ExitCode { Ok = 0, ConfigFailure = 2, NumericalFailure = 3, IoFailure = 4 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::string> format; // csv unless set
    unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, bool needs_config)
{
    auto* opt = app->add_option("--config", c.config, "JSON configuration file");
    if (needs_config)
        opt->required();
    app->add_option("--seed", c.seed, "Master seed (overrides the config)");
    app->add_option("--out", c.out, "Output path (default: stdout)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", c.threads,
                    "Worker threads (fallback: ROBUSTSPLINE_THREADS, else 1)");
}

// Writes to --out or stdout.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open output file '" + path + "'");
    f << text;
    if (!f)
        throw IoError("failed writing output file '" + path + "'");
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::vector<std::size_t> parse_list(const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(static_cast<std::size_t>(std::stoull(item)));
    return out;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string input;
    double lambda = 0.0;
    std::optional<double> lo, hi;
    std::size_t grid = 0;
};

int run_fit(const FitArgs& a, const Common& c)
{
    std::ifstream in(a.input);
    if (!in)
        throw IoError("cannot open input file '" + a.input + "'");
    std::vector<std::pair<double, double>> xy;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x >> y)) {
            if (xy.empty())
                continue; // header
            throw InputError("malformed data line: " + line);
        }
        xy.emplace_back(x, y);
    }
    std::sort(xy.begin(), xy.end());
    if (xy.size() < 3)
        throw InputError("need at least 3 data points");
    std::vector<double> x, y;
    for (auto [xi, yi] : xy) {
        x.push_back(xi);
        y.push_back(yi);
    }
    const double span = x.back() - x.front();
    const Interval dom{a.lo.value_or(x.front() - 0.01 * span), a.hi.value_or(x.back() + 0.01 * span)};
    const DesignPoints design(x, dom);
    const SmoothingParams params(a.lambda);
    if (!params.in_recommended_range(design.size()))
        std::cerr << "warning: lambda <= n^-2, outside the recommended range\n";
    const auto spline = fit(design, y, params);
    const auto d = diagnostics(spline, y, params);

    std::ostringstream os;
    if (c.format == "json") {
        json j;
        j["lambda"] = a.lambda;
        j["knots"] = x;
        j["values"] = std::vector<double>(spline.values().begin(), spline.values().end());
        j["second_derivs"] =
            std::vector<double>(spline.second_derivs().begin(), spline.second_derivs().end());
        j["diagnostics"] = {{"residual_mse", d.residual_mse},
                            {"roughness", d.roughness},
                            {"objective", d.objective}};
        if (a.grid > 1) {
            json g = json::array();
            for (std::size_t k = 0; k < a.grid; ++k) {
                const double t = dom.lo + dom.length() * static_cast<double>(k) /
                                              static_cast<double>(a.grid - 1);
                g.push_back({t, spline.evaluate(t)});
            }
            j["grid"] = g;
        }
        os << j.dump(2) << '\n';
    } else {
        os << "x,value,second_deriv\n";
        for (std::size_t i = 0; i < design.size(); ++i)
            os << format_double(x[i]) << ',' << format_double(spline.values()[i]) << ','
               << format_double(spline.second_derivs()[i]) << '\n';
        std::cerr << "residual_mse=" << format_double(d.residual_mse)
                  << " roughness=" << format_double(d.roughness)
                  << " objective=" << format_double(d.objective) << '\n';
    }
    emit(c.out, os.str());
    return Ok;
}

// ------------------------------------------------------------- attack

int run_attack(const Common& c)
{
    const json j = read_json(c.config);
    // {"target", "design", "domain", "n", "sigma", "lambda", "seed", "attack": {...}}
    static const std::vector<std::string> known = {"target", "design", "domain", "n", "sigma",
                                                   "lambda", "seed", "attack"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError(it.key() + ": unknown key");
    if (!j.contains("attack") || !j["attack"].is_object())
        throw ConfigError("attack: required object");
    const json& aj = j["attack"];
    for (auto it = aj.begin(); it != aj.end(); ++it) {
        static const std::vector<std::string> akeys = {"kind", "q", "q_exponent", "M",
                                                       "baseline_lambda", "truth"};
        if (std::find(akeys.begin(), akeys.end(), it.key()) == akeys.end())
            throw ConfigError("attack." + it.key() + ": unknown key");
    }
    const auto kind = parse_attack_kind(aj.value("kind", std::string{}));
    if (!kind)
        throw ConfigError("attack.kind: expected random, greedy, concentrated or mixture");
    const std::size_t n = j.value("n", std::size_t{200});
    const double sigma = j.value("sigma", 1.0);
    const std::uint64_t seed = c.seed.value_or(j.value("seed", std::uint64_t{1}));
    std::size_t q = aj.contains("q") ? aj["q"].get<std::size_t>()
                                     : budget_for(n, aj.value("q_exponent", 0.3));
    Rng rng = make_rng(seed, 0);

    std::optional<CleanDataset> clean;
    std::optional<CorruptedDataset> attacked;
    if (*kind == AttackKind::Mixture) {
        const auto truth = aj.value("truth", std::string{"f1"}) == "f2" ? Hypothesis::F2 : Hypothesis::F1;
        const auto design = lower_bound_design(n);
        const BumpPair pair(q, n);
        clean = sample_hypothesis(design, pair, truth, sigma, rng);
        attacked = mixture_attack(*clean, truth, pair, rng);
    } else {
        ExperimentConfig base = ExperimentConfig::defaults();
        json sub = json::object();
        for (const char* k : {"target", "design", "domain"})
            if (j.contains(k))
                sub[k] = j[k];
        base = parse_experiment_config(sub);
        DesignSpec spec;
        spec.kind = base.design;
        spec.n = n;
        spec.domain = base.domain;
        spec.mean = base.design_mean;
        spec.sd = base.design_sd;
        const auto design = generate_design(spec);
        const auto target = make_target(base.target, base.domain);
        clean = sample_dataset(target, design, sigma, rng);
        AttackSpec as;
        as.kind = *kind;
        as.q = q;
        as.bound = aj.value("M", 100.0);
        if (aj.contains("baseline_lambda"))
            as.baseline_lambda = aj["baseline_lambda"].get<double>();
        const double lambda = j.value("lambda", lambda_schedule(Metric::R2, n, q));
        Rng arng = make_rng(seed, 1);
        attacked = apply_attack(as, *clean, lambda, arng);
    }

    std::vector<bool> hit(n, false);
    for (auto i : attacked->corrupted)
        hit[i] = true;
    std::ostringstream os;
    if (c.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back({{"i", i}, {"x", clean->design[i]}, {"y", clean->y[i]},
                            {"y_tilde", attacked->y_tilde[i]}, {"corrupted", bool(hit[i])}});
        os << json{{"attack", attack_name(*kind)}, {"q", q}, {"corrupted_count", attacked->corrupted.size()},
                   {"clamped", attacked->clamped}, {"rows", rows}}
                  .dump(2)
           << '\n';
    } else {
        os << "i,x,y,y_tilde,corrupted\n";
        for (std::size_t i = 0; i < n; ++i)
            os << i << ',' << format_double(clean->design[i]) << ',' << format_double(clean->y[i])
               << ',' << format_double(attacked->y_tilde[i]) << ',' << (hit[i] ? 1 : 0) << '\n';
    }
    emit(c.out, os.str());
    return Ok;
}

// --------------------------------------------------------- experiment

int run_experiment(const Common& c)
{
    auto cfg = load_experiment_config(c.config);
    if (c.seed)
        cfg.master_seed = *c.seed;
    const std::string out = c.out.empty() ? cfg.output_path : c.out;
    const bool json_out = c.format ? *c.format == "json" : cfg.format == OutputFormat::Json;
    const auto result = run_convergence(cfg, resolve_threads(c.threads));
    const json summary = to_json(result, cfg);
    if (json_out) {
        emit(out, summary.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_risk_csv(os, result.rows);
        emit(out, os.str());
        json fits_only = {{"fits", summary["fits"]}, {"metadata", summary["metadata"]}};
        if (out.empty())
            std::cerr << fits_only.dump(2) << '\n';
        else
            emit(out + ".summary.json", fits_only.dump(2) + "\n");
    }
    return Ok;
}

// --------------------------------------------------------- lowerbound

struct LowerArgs {
    std::size_t n = 1000;
    std::string q_list = "10,50,250";
    double sigma = 1.0;
    std::size_t reps = 2000;
};

int run_lower(const LowerArgs& a, const Common& c)
{
    const auto qs = parse_list(a.q_list);
    const auto rows = run_lowerbound(qs, a.n, a.sigma, a.reps, c.seed.value_or(1),
                                     resolve_threads(c.threads));
    std::ostringstream os;
    if (c.format == "json")
        os << to_json(rows).dump(2) << '\n';
    else
        write_lowerbound_csv(os, rows);
    emit(c.out, os.str());
    return Ok;
}

// ------------------------------------------------------------- kernel

struct KernelArgs {
    std::size_t n = 500;
    std::optional<double> lambda;
    std::string design = "uniform";
    double lo = 0.0, hi = 1.0;
    std::optional<double> tau1, tau2;
    std::size_t grid = 101;
};

int run_kernel(const KernelArgs& a, const Common& c)
{
    KernelDumpConfig cfg;
    cfg.n = a.n;
    cfg.lambda = a.lambda;
    cfg.design = a.design == "gaussian" ? DesignKind::GaussianQuantile : DesignKind::UniformQuantile;
    cfg.domain = {a.lo, a.hi};
    if (a.tau1 || a.tau2) {
        const auto def = default_interior(cfg.domain);
        cfg.interior = Interval{a.tau1.value_or(def.lo), a.tau2.value_or(def.hi)};
    }
    cfg.grid_size = a.grid;
    const auto grid = run_kernel_dump(cfg, resolve_threads(c.threads));
    for (const auto& w : grid.summary.warnings)
        std::cerr << "warning: " << w << '\n';
    std::ostringstream os;
    if (c.format == "json") {
        json rows = json::array();
        for (const auto& r : grid.rows)
            rows.push_back({r.x, r.s, r.j, r.weight, r.kernel, r.abs_diff});
        os << json{{"columns", {"x", "s", "j", "W_n", "W_hat", "abs_diff"}},
                   {"rows", rows},
                   {"summary", to_json(grid.summary)}}
                  .dump(2)
           << '\n';
        emit(c.out, os.str());
    } else {
        write_kernel_csv(os, grid);
        emit(c.out, os.str());
        const std::string summary = to_json(grid.summary).dump(2) + "\n";
        if (c.out.empty())
            std::cerr << summary;
        else
            emit(c.out + ".summary.json", summary);
    }
    return Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Smoothing splines under adversarial label corruption"};
    app.require_subcommand(1);

    Common common;
    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a cubic smoothing spline to (x, y) data");
    add_common(fit_cmd, common, false);
    fit_cmd->add_option("--input", fit_args.input, "CSV file with x,y columns")->required();
    fit_cmd->add_option("--lambda", fit_args.lambda, "Smoothing parameter")->required();
    fit_cmd->add_option("--domain-lo", fit_args.lo, "Domain lower end");
    fit_cmd->add_option("--domain-hi", fit_args.hi, "Domain upper end");
    fit_cmd->add_option("--grid", fit_args.grid, "Also evaluate on this many grid points (json)");

    auto* attack_cmd = app.add_subcommand("attack", "Generate one clean and corrupted dataset");
    add_common(attack_cmd, common, true);

    auto* exp_cmd = app.add_subcommand("experiment", "Convergence-rate experiment");
    add_common(exp_cmd, common, true);

    LowerArgs lower_args;
    auto* lower_cmd = app.add_subcommand("lowerbound", "Two-point lower-bound table");
    add_common(lower_cmd, common, false);
    lower_cmd->add_option("--n", lower_args.n, "Sample size");
    lower_cmd->add_option("--q", lower_args.q_list, "Comma-separated corruption budgets");
    lower_cmd->add_option("--sigma", lower_args.sigma, "Noise standard deviation");
    lower_cmd->add_option("--reps", lower_args.reps, "Replications for the KS check (0 skips)");

    KernelArgs kernel_args;
    auto* kernel_cmd = app.add_subcommand("kernel", "Dump W_n against the equivalent kernel");
    add_common(kernel_cmd, common, false);
    kernel_cmd->add_option("--n", kernel_args.n, "Sample size");
    kernel_cmd->add_option("--lambda", kernel_args.lambda, "Smoothing parameter (default n^-0.8)");
    kernel_cmd->add_option("--design", kernel_args.design, "uniform or gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    kernel_cmd->add_option("--domain-lo", kernel_args.lo, "Domain lower end");
    kernel_cmd->add_option("--domain-hi", kernel_args.hi, "Domain upper end");
    kernel_cmd->add_option("--tau1", kernel_args.tau1, "Interior lower end");
    kernel_cmd->add_option("--tau2", kernel_args.tau2, "Interior upper end");
    kernel_cmd->add_option("--grid", kernel_args.grid, "Grid points per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Ok : ConfigFailure;
    }

    try {
        if (*fit_cmd)
            return run_fit(fit_args, common);
        if (*attack_cmd)
            return run_attack(common);
        if (*exp_cmd)
            return run_experiment(common);
        if (*lower_cmd)
            return run_lower(lower_args, common);
        if (*kernel_cmd)
            return run_kernel(kernel_args, common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return IoFailure;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return NumericalFailure;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ConfigFailure;
    }
    return Ok;
}
