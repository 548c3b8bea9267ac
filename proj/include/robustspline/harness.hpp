#pragma once

#include "robustspline/adversary.hpp"
#include "robustspline/risk.hpp"
#include "robustspline/smoother.hpp"
#include "robustspline/targets.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace robustspline {

enum class OutputFormat { Csv, Json };

struct TargetConfig {
    std::string kind = "xsinx"; // xsinx | mlp3 | zero | linear
    std::size_t hidden = 32;
    std::uint64_t mlp_seed = 7;
    double intercept = 0.0;
    double slope = 1.0;
};

struct AttackConfig {
    AttackKind kind = AttackKind::Random;
    std::optional<std::size_t> q;
    std::optional<double> q_exponent;
    std::optional<double> bound;
    std::optional<double> baseline_lambda;
};

struct ExperimentConfig {
    TargetConfig target;
    DesignKind design = DesignKind::UniformQuantile;
    std::optional<double> design_mean;
    std::optional<double> design_sd;
    Interval domain{-10.0, 10.0};
    double sigma = 1.0;
    double bound = 100.0; // M
    double q_exponent = 0.3;
    std::vector<std::size_t> n_grid{256, 512, 1024, 2048, 4096, 8192};
    std::vector<Metric> metrics{Metric::R2, Metric::Rinf};
    std::vector<AttackConfig> attacks;
    bool max_over_set = true;
    std::size_t trials = 20;
    std::uint64_t master_seed = 1;
    std::optional<double> fixed_lambda; // unset → schedule
    std::size_t l2_grid = 2048;
    std::size_t linf_grid = 8192;
    bool self_test = false;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;

    /// Default attack list: random, greedy, concentrated.
    static ExperimentConfig defaults();
    void validate() const;
};

/// Parses and validates; unknown keys and type errors raise ConfigError naming
/// the offending field path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

TargetFunction make_target(const TargetConfig& cfg, Interval domain);

/// q = ⌈n^β⌉, capped at n.
std::size_t budget_for(std::size_t n, double beta);

struct RiskRow {
    std::string metric;
    std::size_t n = 0;
    std::size_t q = 0;
    double lambda = 0.0;
    std::string attack;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

struct RatePoint {
    std::size_t n = 0;
    double risk = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<RatePoint> points;
};

/// Least-squares slope of log R̂ against log n; needs ≥ 4 points with R̂ > 0.
std::optional<RateFit> fit_rate(const std::vector<RatePoint>& points);

struct RateFitEntry {
    std::string metric;
    std::string attack;
    std::optional<RateFit> fit;
    std::string note;
};

struct ConvergenceResult {
    std::vector<RiskRow> rows;
    std::vector<RateFitEntry> fits;
};

ConvergenceResult run_convergence(const ExperimentConfig& config, unsigned threads = 1);

struct LowerBoundRow {
    std::size_t q = 0;
    std::size_t n = 0;
    double r_q = 0.0;
    double l2_gap_squared = 0.0;
    double linf_gap = 0.0;
    double lecam_bound = 0.0;
    double max_ks = 0.0;
    double ks_critical = 0.0;
    std::size_t eligible = 0;
    double pass_fraction = 1.0;
};

struct IndistinguishabilityResult {
    std::vector<double> ks; // per eligible coordinate
    double critical = 0.0;
    double pass_fraction = 1.0;
    double max_ks = 0.0;
};

/// Draws `reps` corrupted datasets under f₁ and under f₂ and compares the two
/// samples of each eligible coordinate with a two-sample KS test at 1%.
IndistinguishabilityResult mixture_indistinguishability(std::size_t n, std::size_t q, double sigma,
                                                        std::size_t reps, std::uint64_t seed,
                                                        unsigned threads = 1);

std::vector<LowerBoundRow> run_lowerbound(const std::vector<std::size_t>& q_list, std::size_t n,
                                          double sigma, std::size_t reps, std::uint64_t seed,
                                          unsigned threads = 1);

struct KernelDumpConfig {
    std::size_t n = 500;
    std::optional<double> lambda; // unset → n^{-4/5}
    DesignKind design = DesignKind::UniformQuantile;
    Interval domain{0.0, 1.0};
    std::optional<Interval> interior;
    std::size_t grid_size = 101;
};

KernelGrid run_kernel_dump(const KernelDumpConfig& cfg, unsigned threads = 1);

// Writers. Numbers are printed with 17 significant digits so output is
// byte-reproducible.
std::string format_double(double v);
void write_risk_csv(std::ostream& os, const std::vector<RiskRow>& rows);
nlohmann::json to_json(const ConvergenceResult& result, const ExperimentConfig& config);
void write_lowerbound_csv(std::ostream& os, const std::vector<LowerBoundRow>& rows);
nlohmann::json to_json(const std::vector<LowerBoundRow>& rows);
void write_kernel_csv(std::ostream& os, const KernelGrid& grid);
nlohmann::json to_json(const KernelApproxResult& summary);

extern const char* const risk_csv_header;
extern const char* const lowerbound_csv_header;
extern const char* const kernel_csv_header;

} // namespace robustspline
