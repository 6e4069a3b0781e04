#pragma once

// Sharpness of the exponent 2 on the family K = unit ball, L = eps x0 + K.
//
// h_K = 1 and h_L(u) = 1 + eps <x0, u>, so delta_p is the spherical mean of
// (1 + eps t)^p - 1 over the marginal t = <x0, u>, and A is twice the
// normalized volume of a spherical cap of height eps / 2.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace lpstab::sharpness {

/// Mean of g(<x0, u>) over the unit sphere S^{n-1}. The marginal density of t
/// is proportional to (1 - t^2)^((n-3)/2); after t = cos(theta) the integrand
/// g(cos theta) sin^(n-2)(theta) is smooth on [0, pi] for every n >= 2.
/// Throws std::runtime_error when adaptive quadrature misses 1e-12 relative.
[[nodiscard]] double sphere_mean(const std::function<double(double)>& g, int n);

/// Volume of the unit ball in R^n.
[[nodiscard]] double unit_ball_volume(int n);

[[nodiscard]] double ball_delta_p(int n, double p, double eps);

/// V_p(K, L) - V(K) for the translated-ball pair (the unnormalized excess).
[[nodiscard]] double ball_mixed_volume_excess(int n, double p, double eps);

/// Relative asymmetry of two unit balls whose centers are eps apart, 0 < eps < 2.
[[nodiscard]] double ball_asymmetry(int n, double eps);

/// beta_p for the planar pair through support polytopes at `directions`.
[[nodiscard]] double planar_ball_beta(double p, double eps, std::size_t directions);

struct ScanRow {
    double eps = 0.0;
    double delta_p = 0.0;
    double asymmetry = 0.0;
    double asymmetry_sq = 0.0;
    std::optional<double> beta_p;
};

struct EpsilonScan {
    int n = 2;
    double p = 2.0;
    std::size_t directions = 0;
    std::vector<ScanRow> rows;

    double delta_slope = 0.0;
    double asymmetry_sq_slope = 0.0;
    std::optional<double> beta_slope;

    /// Intercepts of least-squares fits in eps^2, i.e. the eps -> 0 limits.
    double delta_over_eps_sq = 0.0;
    double asymmetry_over_eps = 0.0;
    double delta_over_asymmetry_sq = 0.0;

    /// Both slopes within 2 +- 0.05 and a positive delta / A^2 limit.
    bool sharp = false;
};

/// 8 log-spaced points per decade over [1e-3, 1e-1], endpoints included.
[[nodiscard]] std::vector<double> default_epsilon_grid();

[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Intercept c0 of the least-squares fit y = c0 + c1 x^2.
[[nodiscard]] double even_extrapolation(const std::vector<double>& x, const std::vector<double>& y);

/// Requires at least 5 values in (0, 0.2] spanning a decade. beta_p rows are
/// only produced at n = 2.
[[nodiscard]] EpsilonScan sharpness_scan(int n, double p, const std::vector<double>& eps,
                                         bool include_beta = false, std::size_t directions = 8192);

} // namespace lpstab::sharpness
