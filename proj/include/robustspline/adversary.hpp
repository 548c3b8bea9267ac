#pragma once

#include "robustspline/design.hpp"
#include "robustspline/lecam.hpp"
#include "robustspline/mixture.hpp"
#include "robustspline/rng.hpp"
#include "robustspline/targets.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace robustspline {

enum class AttackKind { Random, Greedy, Concentrated, Mixture };

const char* attack_name(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(const std::string& name);

/// Responses after an attack. Indices outside `corrupted` keep their clean
/// value bit-for-bit.
struct CorruptedDataset {
    DesignPoints design;
    std::vector<double> y_tilde;
    std::vector<std::size_t> corrupted; // ascending
    std::size_t budget = 0;
    double bound = 0.0;                  // M
    std::size_t clamped = 0;             // greedy: updates clipped to [−M, M]
    std::vector<std::size_t> pick_order; // greedy: selection sequence
};

/// Replaces q indices chosen uniformly without replacement by M.
CorruptedDataset random_attack(const CleanDataset& ds, std::size_t q, double bound, Rng& rng);

/// Fits the baseline spline once on clean data, then corrupts the q points
/// with the smallest residual (ties → smallest index), pushing each by
/// M·sign(f̂ − y) with sign(0) = +1 and clipping to [−M, M].
CorruptedDataset greedy_attack(const CleanDataset& ds, std::size_t q, double bound,
                               double baseline_lambda);

/// q consecutive indices whose window starts at median_rank − ⌊q/2⌋
/// (1-based, median_rank = ⌊n/2⌋ + 1), clipped into [1, n − q + 1]; set to M.
CorruptedDataset concentrated_attack(const CleanDataset& ds, std::size_t q, double bound);

/// First 0-based index of the concentrated window.
std::size_t concentrated_window_start(std::size_t n, std::size_t q);

enum class Hypothesis { F1, F2 };

/// Design x_i = i/n, i = 1..n, used by the lower-bound construction. It is the
/// uniform quantile design on [0, 1 + 1/n], which keeps every point interior.
DesignPoints lower_bound_design(std::size_t n);

/// Per-coordinate adversary matching the response laws under f₁ and f₂.
/// Coordinates with x_i < r_q carry the pair of N(f_k(x_i), σ²) and the
/// residual densities built from it; the rest are left untouched.
class MixtureAdversary {
public:
    MixtureAdversary(const DesignPoints& design, const BumpPair& pair, double sigma);

    /// With probability α_i replaces y_i by a draw from Q₁⁽ⁱ⁾ (truth f₁) or Q₂⁽ⁱ⁾ (truth f₂).
    CorruptedDataset apply(const CleanDataset& ds, Hypothesis truth, Rng& rng) const;

    std::size_t eligible() const { return pairs_.size(); }
    const MixturePair& coordinate(std::size_t i) const { return pairs_.at(i); }
    const BumpPair& pair() const { return bump_; }

private:
    DesignPoints design_;
    BumpPair bump_;
    double sigma_;
    std::vector<MixturePair> pairs_; // index i ↔ design point i, for x_i < r_q
};

CorruptedDataset mixture_attack(const CleanDataset& ds, Hypothesis truth, const BumpPair& pair,
                                Rng& rng);

/// Clean responses y_i = f_k(x_i) + ε_i for the construction's hypotheses.
CleanDataset sample_hypothesis(const DesignPoints& design, const BumpPair& pair, Hypothesis truth,
                               double sigma, Rng& rng);

} // namespace robustspline
