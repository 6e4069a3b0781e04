#include "lpstab/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace lpstab::jensen {

namespace {

void require_positive_exponent(double p) {
    if (!std::isfinite(p) || p <= 0.0) {
        throw InvalidParameter("exponent p must be a finite positive number, got " +
                               std::to_string(p));
    }
}

// g * ln g with the continuous extension 0 ln 0 = 0.
double entropy_term(double g) { return g > 0.0 ? g * std::log(g) : 0.0; }

// (g^p - g) / (p - 1) without cancellation near p = 1; zero at g = 0.
double power_gap_term(double g, double p) {
    if (g <= 0.0) return 0.0;
    return g * std::expm1((p - 1.0) * std::log(g)) / (p - 1.0);
}

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights, std::vector<double> values)
    : weights_(std::move(weights)), values_(std::move(values)) {
    if (weights_.empty()) throw InvalidDistribution("distribution must have at least one atom");
    if (weights_.size() != values_.size()) {
        throw InvalidDistribution("weights and values differ in length (" +
                                  std::to_string(weights_.size()) + " vs " +
                                  std::to_string(values_.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0)
            throw InvalidDistribution("weight " + std::to_string(i) + " is not positive");
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            throw InvalidDistribution("value " + std::to_string(i) + " is negative or not finite");
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidDistribution("weights sum to " + std::to_string(total) + ", not 1");
    mean_ = std::inner_product(weights_.begin(), weights_.end(), values_.begin(), 0.0);
    if (!(mean_ > 0.0)) throw InvalidDistribution("function vanishes identically");
}

DiscreteDistribution DiscreteDistribution::with_unnormalized_weights(std::vector<double> weights,
                                                                     std::vector<double> values) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw InvalidDistribution("weights must have positive total");
    for (auto& w : weights) w /= total;
    // Division can leave the sum a few ulps off; the tolerance absorbs it.
    return {std::move(weights), std::move(values)};
}

DiscreteDistribution DiscreteDistribution::scaled(double c) const {
    if (!std::isfinite(c) || c <= 0.0) throw InvalidParameter("scale factor must be positive");
    auto values = values_;
    for (auto& v : values) v *= c;
    return {weights_, std::move(values)};
}

double stability_constant(double p) {
    require_positive_exponent(p);
    if (p >= 1.0) return 0.5;
    return std::exp((p + 1.0) * std::log(p + 1.0) - (p - 1.0) * std::log(p)) / 8.0;
}

TsallisEntropy tsallis_entropy(const DiscreteDistribution& d, double p) {
    return {jensen_deficit(d, p), d.mean()};
}

double jensen_deficit(const DiscreteDistribution& d, double p) {
    require_positive_exponent(p);
    const double m = d.mean();
    const auto& w = d.weights();
    const auto& f = d.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double g = f[i] / m;
        sum += w[i] * (p == 1.0 ? entropy_term(g) : power_gap_term(g, p));
    }
    return sum;
}

double l1_deviation(const DiscreteDistribution& d) {
    const double m = d.mean();
    const auto& w = d.weights();
    const auto& f = d.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * std::abs(f[i] / m - 1.0);
    return sum;
}

JensenReport stability_check(const DiscreteDistribution& d, double p) {
    JensenReport r;
    r.p = p;
    r.c_p = stability_constant(p);
    r.deficit = jensen_deficit(d, p);
    r.deviation = l1_deviation(d);
    r.margin = r.deficit - r.c_p * r.deviation * r.deviation;
    return r;
}

double psi(double a, double t, double p) {
    require_positive_exponent(p);
    if (p == 1.0) throw InvalidParameter("psi is undefined at p = 1");
    if (!(a > 0.0)) throw InvalidParameter("psi requires a > 0");
    if (!(t >= a)) throw InvalidParameter("psi requires t >= a");
    if (!(t < 1.0)) throw InvalidParameter("psi requires t < 1");
    const double inner = std::pow(t, 1.0 - p) * std::pow(a, p) +
                         std::pow(1.0 - t, 1.0 - p) * std::pow(1.0 - a, p) - 1.0;
    const double gap = t - a;
    return inner / (p - 1.0) - 4.0 * stability_constant(p) * gap * gap;
}

PsiGridMinimum psi_grid_oracle(double p, std::size_t a_steps, std::size_t t_steps) {
    if (a_steps < 2 || t_steps < 2) throw InvalidParameter("grid needs at least 2 steps per axis");
    PsiGridMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    const double t_max = 1.0 - 1.0 / static_cast<double>(t_steps);
    for (std::size_t i = 1; i <= a_steps; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(a_steps + 1);
        const double span = std::max(t_max - a, 0.0);
        const double step = span / static_cast<double>(t_steps - 1);
        for (std::size_t j = 0; j < t_steps; ++j) {
            const double t = j + 1 == t_steps ? std::max(t_max, a) : a + static_cast<double>(j) * step;
            const double v = psi(a, t, p);
            if (v < best.value) best = {v, a, t, step};
            if (span == 0.0) break;
        }
    }
    return best;
}

double log_jensen_gap(const DiscreteDistribution& d) {
    const auto& w = d.weights();
    const auto& f = d.values();
    double mean_log = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(f[i] > 0.0))
            throw InvalidDistribution("logarithmic gap needs strictly positive values (atom " +
                                      std::to_string(i) + ")");
        mean_log += w[i] * std::log(f[i]);
    }
    const double dev = l1_deviation(d);
    return std::log(d.mean()) - mean_log - dev * dev / 8.0;
}

} // namespace lpstab::jensen
