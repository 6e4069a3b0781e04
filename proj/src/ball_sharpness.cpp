#include "lpstab/ball_sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "lpstab/mixed_volume.hpp"
#include "lpstab/planar.hpp"

namespace lpstab::sharpness {

namespace {

void require_dimension(int n) {
    if (n < 2) throw std::invalid_argument("dimension must be at least 2, got " + std::to_string(n));
}

// Integral of sin^(n-2) over [0, pi].
double marginal_normalizer(int n) {
    return std::sqrt(std::numbers::pi) * std::exp(std::lgamma((n - 1) / 2.0) - std::lgamma(n / 2.0));
}

} // namespace

namespace {

// Mean over the sphere of an even function of t = <x0, u>, given as
// h(c) = g(c) + g(-c) on c in [0, 1].
double even_mean(const std::function<double(double)>& h, int n) {
    const double power = n - 2;
    auto integrand = [&](double theta) {
        const double w = power == 0 ? 1.0 : std::pow(std::sin(theta), power);
        return h(std::cos(theta)) * w;
    };
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, std::numbers::pi / 2.0, 15, 1e-13, &error, &l1);
    if (!(error <= 1e-12 * l1) && error > 0.0)
        throw std::runtime_error("sphere_mean quadrature did not reach 1e-12 relative accuracy");
    return value / marginal_normalizer(n);
}

// (1 + x)^p + (1 - x)^p - 2 without cancellation: binomial series for small x.
double even_excess(double x, double p) {
    if (x > 0.05) return std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x));
    const double x2 = x * x;
    double coeff = 1.0;
    double power = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 64; ++k) {
        coeff *= (p - (2 * k - 2)) * (p - (2 * k - 1)) / ((2.0 * k - 1) * (2.0 * k));
        power *= x2;
        const double term = coeff * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * sum;
}

} // namespace

double sphere_mean(const std::function<double(double)>& g, int n) {
    require_dimension(n);
    return even_mean([&](double c) { return g(c) + g(-c); }, n);
}

double unit_ball_volume(int n) {
    require_dimension(n);
    return std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
}

double ball_delta_p(int n, double p, double eps) {
    require_dimension(n);
    if (!(p > 1.0)) throw std::invalid_argument("ball_delta_p needs p > 1");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("ball_delta_p needs 0 <= eps < 1");
    if (eps == 0.0) return 0.0;
    return even_mean([=](double c) { return even_excess(eps * c, p); }, n);
}

double ball_mixed_volume_excess(int n, double p, double eps) {
    return unit_ball_volume(n) * ball_delta_p(n, p, eps);
}

double ball_asymmetry(int n, double eps) {
    require_dimension(n);
    if (!(eps > 0.0 && eps < 2.0)) throw std::invalid_argument("ball_asymmetry needs 0 < eps < 2");
    // 1 - (lens / ball) = I_{eps^2/4}(1/2, (n+1)/2).
    return 2.0 * boost::math::ibeta(0.5, 0.5 * (n + 1), 0.25 * eps * eps);
}

double planar_ball_beta(double p, double eps, std::size_t directions) {
    using planar::SupportOracle;
    const auto k = SupportOracle::ball({0.0, 0.0}, 1.0);
    const auto l = SupportOracle::ball({eps, 0.0}, 1.0);
    return mixed::deficit_beta(k, l, p, directions).value;
}

std::vector<double> default_epsilon_grid() {
    std::vector<double> out;
    for (int k = 0; k <= 16; ++k) out.push_back(std::pow(10.0, -3.0 + k / 8.0));
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs matching samples");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive samples");
    }
    double mx = 0.0;
    double my = 0.0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / m;
        my += std::log(y[i]) / m;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double even_extrapolation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("extrapolation needs matching samples");
    double mz = 0.0;
    double my = 0.0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mz += x[i] * x[i] / m;
        my += y[i] / m;
    }
    double szy = 0.0;
    double szz = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dz = x[i] * x[i] - mz;
        szy += dz * (y[i] - my);
        szz += dz * dz;
    }
    return my - (szy / szz) * mz;
}

EpsilonScan sharpness_scan(int n, double p, const std::vector<double>& eps, bool include_beta,
                           std::size_t directions) {
    require_dimension(n);
    if (eps.size() < 5) throw std::invalid_argument("sharpness scan needs at least 5 eps values");
    const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
    if (!(*lo > 0.0) || *hi > 0.2) throw std::invalid_argument("eps values must lie in (0, 0.2]");
    if (*hi < 10.0 * *lo) throw std::invalid_argument("eps values must span at least a decade");

    EpsilonScan scan;
    scan.n = n;
    scan.p = p;
    const bool with_beta = include_beta && n == 2;
    scan.directions = with_beta ? directions : 0;

    std::vector<double> xs = eps;
    std::sort(xs.begin(), xs.end());
    std::vector<double> deltas, asym_sq, betas, delta_ratio, asym_ratio, shape_ratio;
    for (double e : xs) {
        ScanRow row;
        row.eps = e;
        row.delta_p = ball_delta_p(n, p, e);
        row.asymmetry = ball_asymmetry(n, e);
        row.asymmetry_sq = row.asymmetry * row.asymmetry;
        if (with_beta) row.beta_p = planar_ball_beta(p, e, directions);
        deltas.push_back(row.delta_p);
        asym_sq.push_back(row.asymmetry_sq);
        if (row.beta_p) betas.push_back(*row.beta_p);
        delta_ratio.push_back(row.delta_p / (e * e));
        asym_ratio.push_back(row.asymmetry / e);
        shape_ratio.push_back(row.delta_p / row.asymmetry_sq);
        scan.rows.push_back(row);
    }

    scan.delta_slope = loglog_slope(xs, deltas);
    scan.asymmetry_sq_slope = loglog_slope(xs, asym_sq);
    if (with_beta) scan.beta_slope = loglog_slope(xs, betas);
    scan.delta_over_eps_sq = even_extrapolation(xs, delta_ratio);
    scan.asymmetry_over_eps = even_extrapolation(xs, asym_ratio);
    scan.delta_over_asymmetry_sq = even_extrapolation(xs, shape_ratio);
    scan.sharp = std::abs(scan.delta_slope - 2.0) <= 0.05 && std::abs(scan.asymmetry_sq_slope - 2.0) <= 0.05 &&
                 scan.delta_over_asymmetry_sq > 0.0;
    return scan;
}

} // namespace lpstab::sharpness
