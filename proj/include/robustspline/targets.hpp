#pragma once

#include "robustspline/design.hpp"
#include "robustspline/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace robustspline {

/// Weights of a 1 → h → h → 1 network with tanh hidden layers and a linear
/// output. Every entry lies in [−1, 1].
struct MLP3Params {
    std::size_t hidden = 32;
    std::vector<double> w1, b1; // h
    std::vector<double> w2;     // h × h, row-major (out, in)
    std::vector<double> b2;     // h
    std::vector<double> w3;     // h
    double b3 = 0.0;
    std::uint64_t seed = 0;

    /// Weights i.i.d. uniform on [−1, 1] from the seeded stream.
    static MLP3Params random(std::size_t hidden, std::uint64_t seed);
    /// All weights and biases set to `value`.
    static MLP3Params constant(std::size_t hidden, double value);

    void validate() const;
};

double mlp_forward(const MLP3Params& params, double x);

enum class TargetKind { XSinX, MLP3, Zero, Linear, Custom };

/// Regression function f on a domain with a bound |f| ≤ m₁ there.
class TargetFunction {
public:
    static TargetFunction x_sin_x(Interval domain = {-10.0, 10.0});
    static TargetFunction mlp3(MLP3Params params, Interval domain = {-10.0, 10.0});
    static TargetFunction zero(Interval domain = {0.0, 1.0});
    static TargetFunction linear(double intercept, double slope, Interval domain = {0.0, 1.0});
    static TargetFunction custom(std::function<double(double)> f, Interval domain, double bound,
                                 std::string name = "custom");

    double operator()(double x) const { return f_(x); }
    TargetKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    double bound() const { return bound_; }
    const std::function<double(double)>& function() const { return f_; }

private:
    TargetFunction(TargetKind kind, std::string name, std::function<double(double)> f,
                   Interval domain, double bound);

    TargetKind kind_;
    std::string name_;
    std::function<double(double)> f_;
    Interval domain_;
    double bound_;
};

enum class DesignKind { UniformQuantile, GaussianQuantile, Explicit };

struct DesignSpec {
    DesignKind kind = DesignKind::UniformQuantile;
    std::size_t n = 0;
    Interval domain{0.0, 1.0};
    // Truncated Gaussian; defaults are the domain centre and (b − a)/4.
    std::optional<double> mean;
    std::optional<double> sd;
    std::vector<double> points; // Explicit only

    double gaussian_mean() const { return mean.value_or(0.5 * (domain.lo + domain.hi)); }
    double gaussian_sd() const { return sd.value_or(0.25 * domain.length()); }
};

/// Quantile designs x_i = F⁻¹(i/(n+1)), i = 1..n; Explicit is validated as-is.
DesignPoints generate_design(const DesignSpec& spec);

struct CleanDataset {
    DesignPoints design;
    std::vector<double> y;
    double sigma = 0.0;
    TargetFunction truth;
};

/// y_i = f(x_i) + ε_i with ε_i ~ N(0, σ²) drawn in index order from rng.
CleanDataset sample_dataset(const TargetFunction& f, const DesignPoints& design, double sigma,
                            Rng& rng);

} // namespace robustspline
