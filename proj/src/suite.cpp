#include "lpstab/suite.hpp"

#include <cmath>
#include <numbers>

namespace lpstab::suite {

std::uint64_t instance_seed(std::uint64_t base, std::uint64_t index) noexcept {
    // splitmix64 finalizer over the combined state.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

planar::Polygon random_polygon(Rng& rng, int min_vertices, int max_vertices) {
    std::uniform_int_distribution<int> count_dist(min_vertices, max_vertices);
    std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius_dist(0.2, 1.0);
    const int count = count_dist(rng);
    for (;;) {
        std::vector<double> angles(static_cast<std::size_t>(count));
        for (auto& a : angles) a = angle_dist(rng);
        std::sort(angles.begin(), angles.end());
        std::vector<planar::Vec2> pts;
        for (double a : angles) pts.push_back(radius_dist(rng) * planar::unit_at(a));
        try {
            auto poly = planar::Polygon::from_vertices(pts);
            if (poly.size() == pts.size()) return poly;
        } catch (const planar::GeometryError&) {
        }
    }
}

jensen::DiscreteDistribution random_distribution(Rng& rng) {
    std::uniform_int_distribution<int> size_dist(2, 50);
    std::uniform_int_distribution<int> kind_dist(0, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto size = static_cast<std::size_t>(size_dist(rng));
    const int kind = kind_dist(rng);

    std::vector<double> weights(size);
    std::vector<double> values(size);
    const bool uniform_weights = unit(rng) < 0.3;
    std::exponential_distribution<double> expo(1.0);
    std::lognormal_distribution<double> lognormal(0.0, 2.0);
    const double pareto_shape = 0.8 + 2.0 * unit(rng);
    for (std::size_t i = 0; i < size; ++i) {
        weights[i] = uniform_weights ? 1.0 : expo(rng) + 1e-3;
        switch (kind) {
        case 0: values[i] = unit(rng); break;
        case 1: values[i] = expo(rng); break;
        case 2: values[i] = lognormal(rng); break;
        case 3: values[i] = std::pow(1.0 - unit(rng), -1.0 / pareto_shape); break;
        case 4: values[i] = unit(rng) < 0.5 ? 0.0 : expo(rng); break;
        default: values[i] = 1.0 + 0.05 * (unit(rng) - 0.5); break;
        }
    }
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) values[0] = 1.0;
    return jensen::DiscreteDistribution::with_unnormalized_weights(std::move(weights), std::move(values));
}

} // namespace lpstab::suite
