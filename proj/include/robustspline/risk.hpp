#pragma once

#include "robustspline/adversary.hpp"
#include "robustspline/design.hpp"
#include "robustspline/spline.hpp"
#include "robustspline/targets.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace robustspline {

/// Fills out[k] = f(x[k]) for sorted x.
using BatchFunction = std::function<void(std::span<const double>, std::span<double>)>;

BatchFunction batch(std::function<double(double)> f);
BatchFunction batch(const NaturalCubicSpline& spline);

/// ∫ (f − g)² by composite Simpson on a uniform grid, doubling the panel count
/// from grid_size until the relative change is ≤ 1e-6 (cap 2²⁰ panels).
double l2_distance_squared(const BatchFunction& f, const BatchFunction& g, Interval domain,
                           std::size_t grid_size = 1024);
double l2_distance_squared(const std::function<double(double)>& f,
                           const std::function<double(double)>& g, Interval domain,
                           std::size_t grid_size = 1024);

struct LinfResult {
    double value = 0.0;
    double argmax = 0.0;
};

/// max |f − g| on a uniform grid, refined by golden-section search on the
/// cells adjacent to the grid argmax (to 1e-8 in x).
LinfResult linf_distance(const BatchFunction& f, const BatchFunction& g, Interval domain,
                         std::size_t grid_size = 4096);
LinfResult linf_distance(const std::function<double(double)>& f,
                         const std::function<double(double)>& g, Interval domain,
                         std::size_t grid_size = 4096);

enum class Metric { R2, Rinf };
const char* metric_name(Metric m);
std::optional<Metric> parse_metric(const std::string& name);

/// Smoothing parameter schedule:
///   R₂:  n^{-4/5} if q < n^{0.4}, else (q/n)^{4/3}
///   R∞:  n^{-4/5} if q < n^{0.5}, else (q/n)^{6/5}
double lambda_schedule(Metric metric, std::size_t n, std::size_t q);

struct AttackSpec {
    AttackKind kind = AttackKind::Random;
    std::size_t q = 0;
    double bound = 100.0;                  // M
    std::optional<double> baseline_lambda; // greedy; defaults to the fit λ
};

struct RiskEstimate {
    Metric metric = Metric::R2;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::string attack;
    std::vector<double> per_trial;
    /// For max-over-set estimates: attack attaining the max in each trial.
    std::vector<std::string> attained_by;
};

struct RiskOptions {
    std::size_t l2_grid = 2048;
    std::size_t linf_grid = 8192;
    unsigned threads = 1;
};

/// Squared distances of one trial: [attack][metric] in the order given.
struct TrialOutcome {
    std::vector<std::vector<double>> distance;
};

/// Runs `trials` independent replications. Trial t draws noise from stream
/// (master_seed, noise, t) and attack a's randomness from (master_seed, a, t).
/// Every attack in a trial sees the same clean data.
std::vector<TrialOutcome> simulate_trials(const TargetFunction& target, const DesignPoints& design,
                                          double sigma, std::span<const AttackSpec> attacks,
                                          std::span<const Metric> metrics, double lambda,
                                          std::size_t trials, std::uint64_t master_seed,
                                          const RiskOptions& options = {});

/// Monte Carlo estimate of R₂ or R∞. With one attack the risk under that
/// attack; with several, each trial takes the max over the set.
RiskEstimate estimate_risk(Metric metric, const TargetFunction& target, const DesignPoints& design,
                           double sigma, std::span<const AttackSpec> attacks, double lambda,
                           std::size_t trials, std::uint64_t master_seed,
                           const RiskOptions& options = {});

/// Summarises per-trial values; attained_by may be empty.
RiskEstimate summarize(Metric metric, std::string attack, std::vector<double> per_trial,
                       std::vector<std::string> attained_by = {});

/// Squared distance between target and fit under a metric.
double squared_distance(Metric metric, const TargetFunction& target,
                        const NaturalCubicSpline& fitted, Interval domain,
                        const RiskOptions& options = {});

CorruptedDataset apply_attack(const AttackSpec& spec, const CleanDataset& ds, double fit_lambda,
                              Rng& rng);

} // namespace robustspline
