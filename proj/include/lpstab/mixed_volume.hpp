#pragma once

// L_p mixed volumes, the two deficits, relative asymmetry, and the stability
// checks for planar bodies (n = 2).
//
//   V_p(K, L) = (1/2) sum_i (h_L(u_i) / h_K(u_i))^p h_K(u_i) l_i
//
// over the edges (u_i outward normal, l_i length) of a polygon K. The sum is
// exact because the surface area measure of a polygon is atomic.

#include <cstddef>
#include <string>
#include <vector>

#include "lpstab/planar.hpp"

namespace lpstab::mixed {

using planar::Polygon;
using planar::SupportOracle;

inline constexpr int kDimension = 2;

/// Area of a body together with an error bound for discretized bodies.
struct BodyVolume {
    double value = 0.0;
    double error_estimate = 0.0;
    /// Number of directions used; 0 when the value is closed form.
    std::size_t directions = 0;
};

/// Closed form for polygons, balls and their dilates; otherwise the area of
/// support_polytope(body, N) with the estimate |V_N - V_2N| + pi^3 R^2 / (3 N^2).
[[nodiscard]] BodyVolume body_volume(const SupportOracle& body, std::size_t directions);

/// Always through support_polytope at N directions (exact for polygonal bodies).
[[nodiscard]] BodyVolume discretized_volume(const SupportOracle& body, std::size_t directions);

[[nodiscard]] double mixed_volume_p(const Polygon& k, const SupportOracle& l, double p);
[[nodiscard]] double mixed_volume_p(const Polygon& k, const Polygon& l, double p);

/// V_p(K, L) / (V(K)^(1 - p/2) V(L)^(p/2)) - 1.
[[nodiscard]] double deficit_delta(const Polygon& k, const SupportOracle& l, double p,
                                   std::size_t directions = planar::kDefaultDirections);
[[nodiscard]] double deficit_delta(const Polygon& k, const Polygon& l, double p);

struct BetaDeficit {
    double value = 0.0;
    double error_estimate = 0.0;
    double volume_sum = 0.0;
    double volume_k = 0.0;
    double volume_l = 0.0;
};

/// V(K +_p L)^(p/2) / (V(K)^(p/2) + V(L)^(p/2)) - 1 with all three areas taken
/// from support polytopes at the same N, so the discretization bias largely
/// cancels between numerator and denominator.
[[nodiscard]] BetaDeficit deficit_beta(const SupportOracle& k, const SupportOracle& l, double p,
                                       std::size_t directions);

/// area(K symmetric-difference lambda L) / area(K), lambda = sqrt(V(K)/V(L)).
[[nodiscard]] double relative_asymmetry(const Polygon& k, const Polygon& l);

[[nodiscard]] double sigma(double volume_k, double volume_l);
[[nodiscard]] double sigma(const Polygon& k, const Polygon& l);

struct StabilityReport {
    double p = 0.0;
    int n = kDimension;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double asymmetry = 0.0;
    double sigma = 1.0;
    std::size_t discretization = 0;
    double numerical_error = 0.0;
};

/// delta_p(K, L) >= (p - 1) / (128 n^2) A(K, L)^2. Requires p > 1.
/// `rhs_scale` multiplies the right side; only the exit-code tests use it.
[[nodiscard]] StabilityReport check_theorem_1(const Polygon& k, const Polygon& l, double p,
                                              double rhs_scale = 1.0);

/// beta_p(K, L) >= (p - 1) / (512 n^2 sigma^(p/n)) A(K, L)^2. Requires p > 1.
[[nodiscard]] StabilityReport check_theorem_2(const Polygon& k, const Polygon& l, double p,
                                              std::size_t directions = planar::kDefaultDirections,
                                              double rhs_scale = 1.0);

struct ChainStep {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    /// lhs - rhs for inequalities, -|lhs - rhs| for identities.
    double margin = 0.0;
    bool identity = false;
};

struct ProofChainReport {
    double p = 0.0;
    double delta_p = 0.0;
    double v1 = 0.0;             ///< V_1(K, L) after normalization.
    double gamma = 0.0;          ///< 1 / V_1(K, L).
    double gamma_p = 0.0;        ///< 1 + 2 sqrt(2 delta_p / (p - 1)).
    double support_gap = 0.0;    ///< (1/2) sum |h_{gamma L} - h_K| l_i.
    double v1_hull = 0.0;        ///< V_1(K, K_1).
    double v1_min = 0.0;         ///< (1/2) sum min(h_K, h_{gamma L}) l_i.
    double v1_intersection = 0.0; ///< V_1(K, K_2) with the true intersection.
    double volume_hull = 0.0;    ///< V(K_1), K_1 = conv(K u gamma L).
    double volume_intersection = 0.0; ///< V(K_2), K_2 = K n gamma L.
    double asymmetry = 0.0;
    std::vector<ChainStep> steps;

    [[nodiscard]] double min_margin() const;
};

/// Runs every inequality in the stability argument on dilates of K and L
/// normalized to unit area. Requires p > 1.
[[nodiscard]] ProofChainReport proof_chain(const Polygon& k, const Polygon& l, double p);

} // namespace lpstab::mixed
