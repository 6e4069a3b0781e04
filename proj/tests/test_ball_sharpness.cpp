#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lpstab/ball_sharpness.hpp"

using namespace lpstab::sharpness;
using std::numbers::pi;

namespace {

// n = 3 has a flat marginal: mean of (1 + eps t)^p over t uniform in [-1, 1] is
// ((1+eps)^(p+1) - (1-eps)^(p+1)) / (2 eps (p+1)); expanded term by term it is
// sum_k C(p, 2k) eps^2k / (2k + 1), which keeps its digits at small eps
double delta_n3(double p, double eps) {
    if (eps > 0.2) return (std::pow(1 + eps, p + 1) - std::pow(1 - eps, p + 1)) / (2 * eps * (p + 1)) - 1;
    double binom = 1;
    double sum = 0;
    for (int k = 1; k < 200; ++k) {
        binom *= (p - (2 * k - 2)) * (p - (2 * k - 1)) / ((2.0 * k - 1) * (2.0 * k));
        sum += binom * std::pow(eps, 2 * k) / (2 * k + 1);
    }
    return sum;
}

// two unit discs at distance eps overlap in a lens of this area
double lens_area(double eps) { return 2 * std::acos(eps / 2) - (eps / 2) * std::sqrt(4 - eps * eps); }

struct MonteCarlo {
    double estimate;
    double standard_error;
};

// uniform points in the unit ball; A = 2 P(x outside the shifted ball)
MonteCarlo monte_carlo_asymmetry(int n, double eps, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::size_t outside = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double r2 = 0;
        for (auto& c : x) {
            c = gauss(rng);
            r2 += c * c;
        }
        const double radius = std::pow(unit(rng), 1.0 / n) / std::sqrt(r2);
        double d2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = x[i] * radius - (i == 0 ? eps : 0.0);
            d2 += c * c;
        }
        if (d2 > 1.0) ++outside;
    }
    const double q = static_cast<double>(outside) / static_cast<double>(samples);
    return {2 * q, 2 * std::sqrt(q * (1 - q) / static_cast<double>(samples))};
}

} // namespace

TEST_CASE("sphere mean") {
    for (int n : {2, 3, 4, 7, 10}) {
        CHECK(sphere_mean([](double) { return 1.0; }, n) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(sphere_mean([](double t) { return t; }, n)) <= 1e-15);
        CHECK(sphere_mean([](double t) { return t * t; }, n) == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
    CHECK(sphere_mean([](double t) { return t * t; }, 3) == doctest::Approx(1.0 / 3).epsilon(1e-13));
    CHECK(sphere_mean([](double t) { return t * t * t * t; }, 3) == doctest::Approx(0.2).epsilon(1e-13));
    // n = 2: mean of cos^4 is 3/8
    CHECK(sphere_mean([](double t) { return t * t * t * t; }, 2) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK_THROWS((void)sphere_mean([](double) { return 1.0; }, 1));
}

TEST_CASE("ball volume") {
    CHECK(unit_ball_volume(2) == doctest::Approx(pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4 * pi / 3));
    CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2));
}

TEST_CASE("ball delta examples") {
    CHECK(ball_delta_p(2, 2.0, 0.0) == 0.0);
    CHECK(std::abs(ball_delta_p(2, 2.0, 0.01) - 5.0e-5) <= 1e-8);
    // at p = 2 the mean of (1 + eps cos)^2 - 1 is exactly eps^2 / 2
    CHECK(ball_delta_p(2, 2.0, 0.01) == doctest::Approx(0.5e-4).epsilon(1e-12));
    CHECK(std::abs(ball_delta_p(3, 2.0, 0.01) - 3.333e-5) <= 1e-8);
    for (double p : {1.5, 2.0, 3.7}) {
        for (double eps : {1e-3, 0.05, 0.3, 0.9}) {
            CHECK(ball_delta_p(3, p, eps) == doctest::Approx(delta_n3(p, eps)).epsilon(1e-12));
        }
    }
    CHECK(ball_mixed_volume_excess(3, 2.0, 0.1) == doctest::Approx(unit_ball_volume(3) * ball_delta_p(3, 2.0, 0.1)));

    CHECK_THROWS((void)ball_delta_p(2, 1.0, 0.1));
    CHECK_THROWS((void)ball_delta_p(2, 2.0, 1.0));
    CHECK_THROWS((void)ball_delta_p(2, 2.0, -0.1));
    CHECK_THROWS((void)ball_delta_p(1, 2.0, 0.1));
}

TEST_CASE("ball asymmetry against the lens formula") {
    for (double eps : {1e-3, 0.01, 0.2, 1.0, 1.9}) {
        const double expected = 2 * (pi - lens_area(eps)) / pi;
        CHECK(ball_asymmetry(2, eps) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(std::abs(ball_asymmetry(2, 0.01) - 0.012732) <= 1e-6);
    CHECK(ball_asymmetry(3, 1e-6) < 1e-5);
    CHECK_THROWS((void)ball_asymmetry(2, 0.0));
    CHECK_THROWS((void)ball_asymmetry(2, 2.0));
}

TEST_CASE("ball asymmetry against Monte Carlo") {
    std::uint64_t seed = 100;
    for (int n : {2, 3, 5, 10}) {
        const double eps = 0.15;
        const auto mc = monte_carlo_asymmetry(n, eps, 10'000'000, seed++);
        const double exact = ball_asymmetry(n, eps);
        INFO("n = " << n << " mc " << mc.estimate << " +- " << mc.standard_error << " exact " << exact);
        CHECK(std::abs(mc.estimate - exact) <= 3 * mc.standard_error);
    }
}

TEST_CASE("symmetry and series remainder") {
    for (int n : {2, 3, 5, 10}) {
        for (double p : {1.5, 2.0, 4.0}) {
            const double eps = 0.07;
            const double plus = sphere_mean([&](double t) { return std::pow(1 + eps * t, p); }, n);
            const double minus = sphere_mean([&](double t) { return std::pow(1 - eps * t, p); }, n);
            CHECK(plus == minus);

            double worst = 0;
            for (double e : default_epsilon_grid()) {
                const double series = p * (p - 1) * e * e / (2.0 * n);
                worst = std::max(worst, std::abs(ball_delta_p(n, p, e) - series) / std::pow(e, 4));
            }
            // fourth-order coefficient p(p-1)(p-2)(p-3) m4 / 24 is at most ~1 here
            INFO("n = " << n << " p = " << p << " K = " << worst);
            CHECK(std::isfinite(worst));
            CHECK(worst <= 2.0);
        }
    }
}

TEST_CASE("slope fitting") {
    std::vector<double> x;
    std::vector<double> y;
    for (double e : default_epsilon_grid()) {
        x.push_back(e);
        y.push_back(e * e);
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
    for (auto& v : y) v = 3 + 5 * v;
    CHECK(even_extrapolation(x, y) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS((void)loglog_slope({1.0}, {1.0}));
    CHECK_THROWS((void)loglog_slope({1.0, 2.0}, {1.0, -2.0}));

    const auto grid = default_epsilon_grid();
    CHECK(grid.size() == 17);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid.back() == doctest::Approx(1e-1));
}

TEST_CASE("sharpness scan") {
    const auto scan = sharpness_scan(2, 2.0, default_epsilon_grid());
    CHECK(scan.sharp);
    CHECK(std::abs(scan.delta_slope - 2) <= 0.05);
    CHECK(std::abs(scan.asymmetry_sq_slope - 2) <= 0.05);
    CHECK(std::abs(scan.delta_over_eps_sq / 0.5 - 1) <= 0.02);
    CHECK(std::abs(scan.asymmetry_over_eps / (4 / pi) - 1) <= 0.02);
    // 0.5 / (4/pi)^2
    CHECK(std::abs(scan.delta_over_asymmetry_sq / (pi * pi / 32) - 1) <= 0.02);
    CHECK_FALSE(scan.beta_slope.has_value());

    for (int n : {3, 5, 10}) {
        const double p = 2.0;
        const auto s = sharpness_scan(n, p, default_epsilon_grid());
        CHECK(std::abs(s.delta_over_eps_sq / (p * (p - 1) / (2.0 * n)) - 1) <= 0.02);
    }

    CHECK_THROWS((void)sharpness_scan(2, 2.0, {0.01, 0.02, 0.03, 0.04, 0.05}));
    CHECK_THROWS((void)sharpness_scan(2, 2.0, {0.001, 0.01, 0.1}));
    CHECK_THROWS((void)sharpness_scan(2, 2.0, {0.001, 0.01, 0.05, 0.1, 0.3}));
}

TEST_CASE("planar beta for translated discs") {
    CHECK(planar_ball_beta(2.0, 0.05, 8192) > 0.0);
    const auto scan = sharpness_scan(2, 2.0, default_epsilon_grid(), true, 8192);
    REQUIRE(scan.beta_slope.has_value());
    CHECK(std::abs(*scan.beta_slope - 2) <= 0.1);
    for (const auto& row : scan.rows) {
        REQUIRE(row.beta_p.has_value());
        // h^2 = 2 + 2 eps cos + eps^2 cos^2 and area = (1/2) int (h^2 - h'^2), giving
        // V(K +_2 L) = 2 pi + pi eps^2 / 4 + O(eps^4), so beta = eps^2 / 8 at leading order
        CHECK(*row.beta_p == doctest::Approx(row.eps * row.eps / 8).epsilon(0.02));
    }
}

TEST_CASE("theorem 1 holds along the ball family") {
    for (int n : {2, 3, 5, 10}) {
        for (double p : {1.5, 2.0, 4.0}) {
            for (double e : default_epsilon_grid()) {
                const double a = ball_asymmetry(n, e);
                CHECK(ball_delta_p(n, p, e) >= (p - 1) / (128.0 * n * n) * a * a);
            }
            CHECK(ball_delta_p(n, p, 0.2) >= (p - 1) / (128.0 * n * n) * std::pow(ball_asymmetry(n, 0.2), 2));
        }
    }
}
