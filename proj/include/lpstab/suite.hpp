#pragma once

// Reproducible random instances and a deterministic parallel map.
//
// Instance i of a suite draws from its own generator seeded with
// instance_seed(base, i), so results do not depend on how work is sharded.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "lpstab/jensen.hpp"
#include "lpstab/planar.hpp"

namespace lpstab::suite {

/// Seed used when neither --seed nor LPSTAB_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20150815;

[[nodiscard]] std::uint64_t instance_seed(std::uint64_t base, std::uint64_t index) noexcept;

using Rng = std::mt19937_64;

/// Vertices at sorted uniform angles with radii in [0.2, 1]; draws that are not
/// strictly convex around the origin are rejected and redrawn.
[[nodiscard]] planar::Polygon random_polygon(Rng& rng, int min_vertices = 3, int max_vertices = 8);

/// 2 to 50 atoms; values from uniform, exponential, log-normal, Pareto, sparse
/// (many exact zeros) or near-constant generators.
[[nodiscard]] jensen::DiscreteDistribution random_distribution(Rng& rng);

/// Calls fn(i) for i in [0, count) on up to hardware_concurrency threads and
/// returns the results in index order.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<std::optional<T>> slots(count);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < count; i += workers) slots[i].emplace(fn(i));
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace lpstab::suite
