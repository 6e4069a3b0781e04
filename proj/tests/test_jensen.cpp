#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "lpstab/jensen.hpp"
#include "lpstab/suite.hpp"

using namespace lpstab::jensen;

namespace {

DiscreteDistribution two_point(double w0, double f0, double f1) { return {{w0, 1.0 - w0}, {f0, f1}}; }

// 50-digit evaluation of (p+1)^(p+1) / (8 p^(p-1)).
double constant_oracle(const char* p_text) {
    using big = boost::multiprecision::cpp_dec_float_50;
    const big p(p_text);
    const big value = pow(p + 1, p + 1) / (8 * pow(p, p - 1));
    return value.convert_to<double>();
}

} // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({}, {}), InvalidDistribution);
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.5}, {1.0}), InvalidDistribution);
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.6}, {1.0, 1.0}), InvalidDistribution);
    CHECK_THROWS_AS(DiscreteDistribution({1.0, 0.0}, {1.0, 1.0}), InvalidDistribution);
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.5}, {-1.0, 2.0}), InvalidDistribution);
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.5}, {0.0, 0.0}), InvalidDistribution);
    CHECK_NOTHROW(DiscreteDistribution({1.0}, {3.0}));
}

TEST_CASE("stability constant") {
    CHECK(stability_constant(2.0) == 0.5);
    CHECK(stability_constant(1.0) == 0.5);
    CHECK(std::abs(stability_constant(0.5) - 0.16238) <= 1e-5);
    CHECK(std::abs(stability_constant(0.5) - constant_oracle("0.5")) < 1e-14);
    CHECK(std::abs(stability_constant(0.3) - constant_oracle("0.3")) < 1e-14);
    CHECK(std::abs(stability_constant(1.0 - 1e-4) - 0.5) <= 1e-3);
    CHECK_THROWS_AS((void)stability_constant(0.0), InvalidParameter);
    CHECK_THROWS_AS((void)stability_constant(-1.0), InvalidParameter);
    CHECK_THROWS_AS((void)stability_constant(NAN), InvalidParameter);
}

TEST_CASE("tsallis entropy") {
    const DiscreteDistribution flat({0.2, 0.3, 0.5}, {1.0, 1.0, 1.0});
    CHECK(tsallis_entropy(flat, 3.0).entropy == doctest::Approx(0.0));

    const auto d = two_point(0.5, 0.0, 2.0);
    CHECK(tsallis_entropy(d, 2.0).entropy == doctest::Approx(1.0));
    CHECK(tsallis_entropy(d, 1.0).entropy == doctest::Approx(std::log(2.0)));

    const auto scaled = two_point(0.5, 0.0, 6.0);
    const auto r = tsallis_entropy(scaled, 2.0);
    CHECK(r.scale == doctest::Approx(3.0));
    CHECK(r.entropy == doctest::Approx(1.0));
}

TEST_CASE("jensen deficit and deviation examples") {
    CHECK(jensen_deficit(DiscreteDistribution({0.5, 0.5}, {4.0, 4.0}), 2.5) == doctest::Approx(0.0));
    CHECK(jensen_deficit(two_point(0.5, 0.0, 2.0), 2.0) == doctest::Approx(1.0));
    CHECK(jensen_deficit(two_point(0.5, 0.0, 4.0), 2.0) == doctest::Approx(1.0));

    CHECK(l1_deviation(DiscreteDistribution({0.5, 0.5}, {3.0, 3.0})) == doctest::Approx(0.0));
    CHECK(l1_deviation(two_point(0.5, 0.0, 2.0)) == doctest::Approx(1.0));
    const double a = 0.2;
    const double t = 0.5;
    CHECK(l1_deviation(two_point(t, a / t, (1 - a) / (1 - t))) == doctest::Approx(0.6));
}

TEST_CASE("stability check examples") {
    const DiscreteDistribution flat({0.25, 0.75}, {1.0, 1.0});
    CHECK(stability_check(flat, 2.0).margin == doctest::Approx(0.0));
    const auto d = two_point(0.5, 0.0, 2.0);
    CHECK(stability_check(d, 2.0).margin == doctest::Approx(0.5));
    CHECK(stability_check(d, 1.0).margin == doctest::Approx(std::log(2.0) - 0.5));
    CHECK(stability_check(d, 1.0).margin == doctest::Approx(0.19315).epsilon(1e-4));
}

TEST_CASE("psi values and domain") {
    for (double p : {0.3, 0.5, 2.0, 4.0}) {
        for (double a : {0.1, 0.5, 0.9}) CHECK(std::abs(psi(a, a, p)) < 1e-15);
    }
    CHECK(psi(0.25, 0.5, 2.0) == doctest::Approx(0.125));
    CHECK_THROWS_AS((void)psi(0.2, 1.0, 2.0), InvalidParameter);
    CHECK_THROWS_AS((void)psi(0.0, 0.5, 2.0), InvalidParameter);
    CHECK_THROWS_AS((void)psi(0.6, 0.5, 2.0), InvalidParameter);
    CHECK_THROWS_AS((void)psi(0.2, 0.5, 1.0), InvalidParameter);
}

TEST_CASE("psi grid oracle") {
    for (double p : {0.5, 2.0}) {
        const auto best = psi_grid_oracle(p, 99, 1000);
        CHECK(best.value >= -1e-10);
        CHECK(best.t - best.a <= best.t_step * (1 + 1e-9));
    }
    const auto coarse = psi_grid_oracle(2.0, 2, 2);
    CHECK(std::isfinite(coarse.value));
    CHECK((coarse.a == doctest::Approx(1.0 / 3) || coarse.a == doctest::Approx(2.0 / 3)));
    CHECK_THROWS_AS((void)psi_grid_oracle(2.0, 1, 10), InvalidParameter);
}

TEST_CASE("logarithmic gap") {
    CHECK(log_jensen_gap(DiscreteDistribution({0.5, 0.5}, {2.0, 2.0})) == doctest::Approx(0.0));
    const auto d = two_point(0.5, 1.0, 3.0);
    const double direct = std::log(2.0) - 0.5 * std::log(3.0) - (1.0 / 8.0) * 0.25;
    CHECK(log_jensen_gap(d) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(log_jensen_gap(d) == doctest::Approx(0.112591).epsilon(1e-5));
    CHECK_THROWS_AS((void)log_jensen_gap(two_point(0.5, 0.0, 3.0)), InvalidDistribution);

    // Dividing the power-mean inequality by p and letting p -> 0.
    const double p = 1e-4;
    const double limit = stability_check(d, p).margin / p;
    CHECK(std::abs(limit - log_jensen_gap(d)) <= 1e-3);
}

TEST_CASE("property: margin is nonnegative on random distributions") {
    double worst = 1.0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        lpstab::suite::Rng rng(lpstab::suite::instance_seed(11, i));
        const auto d = lpstab::suite::random_distribution(rng);
        for (double p : {0.3, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0}) {
            const auto r = stability_check(d, p);
            worst = std::min(worst, r.margin);
            REQUIRE(r.margin >= -1e-10);
            REQUIRE(r.deviation >= 0.0);
            REQUIRE(r.deviation <= 2.0 + 1e-12);
        }
    }
    MESSAGE("worst margin " << worst);
}

TEST_CASE("property: scale invariance and continuity at p = 1") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        lpstab::suite::Rng rng(lpstab::suite::instance_seed(12, i));
        const auto d = lpstab::suite::random_distribution(rng);
        for (double p : {0.5, 1.0, 2.0}) {
            const double base = jensen_deficit(d, p);
            for (double c : {1e-6, 1.0, 1e6}) REQUIRE(std::abs(jensen_deficit(d.scaled(c), p) - base) <= 1e-10);
        }
        const double shannon = jensen_deficit(d, 1.0);
        REQUIRE(std::abs(jensen_deficit(d, 1.0 + 1e-5) - shannon) <= 1e-4);
        REQUIRE(std::abs(jensen_deficit(d, 1.0 - 1e-5) - shannon) <= 1e-4);
    }
}

TEST_CASE("property: two-point reduction equals psi") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (int i = 0; i < 2000; ++i) {
        double a = unit(rng);
        double t = unit(rng);
        if (a > t) std::swap(a, t);
        for (double p : {0.3, 0.7, 1.5, 3.0}) {
            const auto d = DiscreteDistribution::with_unnormalized_weights({t, 1 - t}, {a / t, (1 - a) / (1 - t)});
            const double expected = psi(a, t, p);
            // absolute 1e-12 up to |psi| = 1, relative beyond (values reach ~1e6 at p = 3)
            REQUIRE(std::abs(stability_check(d, p).margin - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("property: near-equality forces near-constant values") {
    std::size_t checked = 0;
    for (std::uint64_t i = 0; i < 3000; ++i) {
        lpstab::suite::Rng rng(lpstab::suite::instance_seed(13, i));
        const auto d = lpstab::suite::random_distribution(rng);
        if (l1_deviation(d) <= 0.01) continue;
        ++checked;
        double spread = 0.0;
        for (double v : d.values()) spread = std::max(spread, std::abs(v / d.mean() - 1.0));
        for (double p : {0.3, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0}) {
            if (stability_check(d, p).margin <= 1e-10) REQUIRE(spread <= 1e-5);
        }
    }
    CHECK(checked > 1000);
}
