#pragma once

// Improved Jensen inequality for power means (Tsallis / Pinsker-type stability).
//
// For a probability vector w and a nonnegative f with mean m = sum w_i f_i:
//
//   (1/(p-1)) (sum w f^p / m^p - 1)  >=  c_p (sum w |f/m - 1|)^2
//
// with c_p = 1/2 for p >= 1 and (p+1)^(p+1) / (8 p^(p-1)) for 0 < p < 1.
// At p = 1 the left side is the relative entropy sum w f ln(f/m).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpstab::jensen {

class InvalidDistribution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Finite probability space together with a nonnegative function on its atoms.
class DiscreteDistribution {
public:
    /// Throws InvalidDistribution unless weights are positive and sum to 1
    /// (within 1e-12), values are nonnegative with at least one positive entry,
    /// and both lists have the same nonzero length.
    DiscreteDistribution(std::vector<double> weights, std::vector<double> values);

    /// Same as the constructor but rescales the weights to sum to one first.
    static DiscreteDistribution with_unnormalized_weights(std::vector<double> weights,
                                                          std::vector<double> values);

    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }

    /// sum w_i f_i, always > 0.
    [[nodiscard]] double mean() const noexcept { return mean_; }

    [[nodiscard]] DiscreteDistribution scaled(double c) const;

private:
    std::vector<double> weights_;
    std::vector<double> values_;
    double mean_ = 0.0;
};

struct TsallisEntropy {
    double entropy = 0.0;
    /// The mean of the raw values; the entropy is computed for f / scale.
    double scale = 1.0;
};

struct JensenReport {
    double p = 0.0;
    double deficit = 0.0;
    double deviation = 0.0;
    double c_p = 0.0;
    double margin = 0.0;
};

struct PsiGridMinimum {
    double value = 0.0;
    double a = 0.0;
    double t = 0.0;
    /// Spacing of the t grid at the minimizing a.
    double t_step = 0.0;
};

[[nodiscard]] double stability_constant(double p);

[[nodiscard]] TsallisEntropy tsallis_entropy(const DiscreteDistribution& d, double p);

/// Left side of the improved Jensen inequality; scale invariant, >= 0.
[[nodiscard]] double jensen_deficit(const DiscreteDistribution& d, double p);

/// sum w_i |f_i / mean - 1|, in [0, 2].
[[nodiscard]] double l1_deviation(const DiscreteDistribution& d);

[[nodiscard]] JensenReport stability_check(const DiscreteDistribution& d, double p);

/// Two-parameter reduction: the gap for the two-atom space with weights
/// (t, 1-t) and values (a/t, (1-a)/(1-t)). Requires 0 < a <= t < 1, p != 1.
[[nodiscard]] double psi(double a, double t, double p);

/// Exhaustive scan of psi over a in {i/(a_steps+1)} and a_steps x t_steps points
/// with t running from a to 1 - 1/t_steps. Ties keep the earliest (smallest t).
[[nodiscard]] PsiGridMinimum psi_grid_oracle(double p, std::size_t a_steps = 99,
                                             std::size_t t_steps = 1000);

/// ln(mean) - sum w ln f - (1/8) l1_deviation^2. Requires every value > 0.
[[nodiscard]] double log_jensen_gap(const DiscreteDistribution& d);

} // namespace lpstab::jensen
