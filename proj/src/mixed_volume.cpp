#include "lpstab/mixed_volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lpstab::mixed {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_p_at_least_one(double p) {
    if (!std::isfinite(p) || p < 1.0)
        throw std::invalid_argument("L_p mixed volumes need a finite p >= 1, got " + std::to_string(p));
}

void require_p_above_one(double p) {
    if (!std::isfinite(p) || p <= 1.0)
        throw std::invalid_argument("stability bounds need p > 1, got " + std::to_string(p));
}

double power_mean_denominator(double vk, double vl, double p) {
    const double s = p / kDimension;
    return std::exp((1.0 - s) * std::log(vk) + s * std::log(vl));
}

// Rounding floor for quantities assembled from O(edges) floating-point terms.
double rounding_floor(std::size_t terms, double magnitude) {
    return 64.0 * kEps * static_cast<double>(terms + 1) * (1.0 + std::abs(magnitude));
}

ChainStep inequality(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, lhs - rhs, false};
}

ChainStep identity(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, -std::abs(lhs - rhs), true};
}

} // namespace

BodyVolume discretized_volume(const SupportOracle& body, std::size_t directions) {
    const auto coarse = planar::support_polytope(body, directions);
    BodyVolume out{coarse.area(), 0.0, directions};
    if (body.is_polygonal()) return out;
    const auto fine = planar::support_polytope(body, 2 * directions);
    const double r = fine.circumradius();
    const double n = static_cast<double>(directions);
    out.error_estimate = std::abs(coarse.area() - fine.area()) +
                         std::pow(std::numbers::pi, 3) * r * r / (3.0 * n * n);
    return out;
}

BodyVolume body_volume(const SupportOracle& body, std::size_t directions) {
    switch (body.kind()) {
    case SupportOracle::Kind::Polygon: return {body.as_polygon().area(), 0.0, 0};
    case SupportOracle::Kind::Ball: {
        const double r = body.as_ball().radius;
        return {std::numbers::pi * r * r, 0.0, 0};
    }
    case SupportOracle::Kind::Dilate: {
        const auto& d = body.as_dilate();
        auto inner = body_volume(d.inner, directions);
        const double f2 = d.factor * d.factor;
        return {f2 * inner.value, f2 * inner.error_estimate, inner.directions};
    }
    case SupportOracle::Kind::LpSum: break;
    }
    return discretized_volume(body, directions);
}

double mixed_volume_p(const Polygon& k, const SupportOracle& l, double p) {
    require_p_at_least_one(p);
    const auto& verts = k.vertices();
    const auto& normals = k.normals();
    const auto& lengths = k.edge_lengths();
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double hk = planar::dot(verts[i], normals[i]);
        const double hl = l.evaluate(normals[i]);
        sum += (p == 1.0 ? hl : std::pow(hl / hk, p) * hk) * lengths[i];
    }
    return 0.5 * sum;
}

double mixed_volume_p(const Polygon& k, const Polygon& l, double p) {
    return mixed_volume_p(k, SupportOracle::polygon(l), p);
}

double deficit_delta(const Polygon& k, const SupportOracle& l, double p, std::size_t directions) {
    const double vp = mixed_volume_p(k, l, p);
    const double vl = body_volume(l, directions).value;
    return vp / power_mean_denominator(k.area(), vl, p) - 1.0;
}

double deficit_delta(const Polygon& k, const Polygon& l, double p) {
    return deficit_delta(k, SupportOracle::polygon(l), p);
}

BetaDeficit deficit_beta(const SupportOracle& k, const SupportOracle& l, double p, std::size_t directions) {
    require_p_at_least_one(p);
    if (directions < 64) throw std::invalid_argument("deficit_beta needs at least 64 directions");
    const auto sum = discretized_volume(planar::lp_combination(k, l, p), directions);
    const auto vk = discretized_volume(k, directions);
    const auto vl = discretized_volume(l, directions);

    const double s = p / kDimension;
    const double num = std::pow(sum.value, s);
    const double pk = std::pow(vk.value, s);
    const double pl = std::pow(vl.value, s);
    const double den = pk + pl;

    BetaDeficit out;
    out.value = num / den - 1.0;
    out.volume_sum = sum.value;
    out.volume_k = vk.value;
    out.volume_l = vl.value;
    // First-order propagation of the three area errors.
    out.error_estimate = s * num / (sum.value * den) * sum.error_estimate +
                         s * num / (den * den) * (pk / vk.value * vk.error_estimate + pl / vl.value * vl.error_estimate) +
                         rounding_floor(directions, out.value);
    return out;
}

double relative_asymmetry(const Polygon& k, const Polygon& l) {
    const double lambda = std::sqrt(k.area() / l.area());
    return planar::symmetric_difference_area(k, l.scaled(lambda)) / k.area();
}

double sigma(double volume_k, double volume_l) {
    return std::max(volume_k / volume_l, volume_l / volume_k);
}

double sigma(const Polygon& k, const Polygon& l) { return sigma(k.area(), l.area()); }

StabilityReport check_theorem_1(const Polygon& k, const Polygon& l, double p, double rhs_scale) {
    require_p_above_one(p);
    StabilityReport r;
    r.p = p;
    r.lhs = deficit_delta(k, l, p);
    r.asymmetry = relative_asymmetry(k, l);
    r.sigma = sigma(k, l);
    r.rhs = rhs_scale * (p - 1.0) / (128.0 * kDimension * kDimension) * r.asymmetry * r.asymmetry;
    r.margin = r.lhs - r.rhs;
    r.numerical_error = rounding_floor(k.size() + l.size(), r.lhs);
    return r;
}

StabilityReport check_theorem_2(const Polygon& k, const Polygon& l, double p, std::size_t directions,
                                double rhs_scale) {
    require_p_above_one(p);
    const auto beta = deficit_beta(SupportOracle::polygon(k), SupportOracle::polygon(l), p, directions);
    StabilityReport r;
    r.p = p;
    r.lhs = beta.value;
    r.asymmetry = relative_asymmetry(k, l);
    r.sigma = sigma(k, l);
    r.rhs = rhs_scale * (p - 1.0) /
            (512.0 * kDimension * kDimension * std::pow(r.sigma, p / kDimension)) * r.asymmetry * r.asymmetry;
    r.margin = r.lhs - r.rhs;
    r.discretization = directions;
    r.numerical_error = beta.error_estimate;
    return r;
}

double ProofChainReport::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) m = std::min(m, s.margin);
    return m;
}

ProofChainReport proof_chain(const Polygon& k_in, const Polygon& l_in, double p) {
    require_p_above_one(p);
    constexpr double n = kDimension;
    const Polygon k = k_in.scaled(1.0 / std::sqrt(k_in.area()));
    const Polygon l = l_in.scaled(1.0 / std::sqrt(l_in.area()));
    const double vk = k.area();
    const double vl = l.area();

    ProofChainReport r;
    r.p = p;
    r.delta_p = deficit_delta(k, l, p);
    r.v1 = mixed_volume_p(k, l, 1.0);
    r.gamma = 1.0 / r.v1;
    r.gamma_p = 1.0 + 2.0 * std::sqrt(2.0 * std::max(r.delta_p, 0.0) / (p - 1.0));
    const Polygon gl = l.scaled(r.gamma);

    double gap = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const planar::Vec2 u = k.normals()[i];
        const double hk = planar::dot(k.vertices()[i], u);
        const double hg = gl.support(u);
        const double len = k.edge_lengths()[i];
        gap += std::abs(hg - hk) * len;
        upper += std::max(hg, hk) * len;
        lower += std::min(hg, hk) * len;
    }
    r.support_gap = gap / n;
    r.v1_min = lower / n;

    const Polygon hull = planar::convex_hull_union(k, gl);
    const Polygon meet = planar::intersection(k, gl);
    r.v1_hull = mixed_volume_p(k, hull, 1.0);
    r.v1_intersection = mixed_volume_p(k, meet, 1.0);
    r.volume_hull = hull.area();
    r.volume_intersection = meet.area();
    r.asymmetry = relative_asymmetry(k_in, l_in);

    const double delta = r.delta_p;
    const double v1p = std::pow(r.v1, p);
    const double s = r.support_gap;
    const double jensen_rhs = (p - 1.0) / 2.0 * v1p * s * s + v1p - 1.0;
    const double linear_rhs = (p - 1.0) / 2.0 * s * s + p * (r.v1 - 1.0);
    auto& st = r.steps;
    st.push_back(inequality("aaa.jensen", delta, jensen_rhs));
    st.push_back(inequality("aaa.bernoulli", jensen_rhs, linear_rhs));
    st.push_back(inequality("gamma.upper", 1.0, r.gamma));
    st.push_back(inequality("gamma.lower", r.gamma, p / (p + delta)));

    // max - min = |difference| pointwise, so the support gap equals the full
    // difference of the two mixed volumes; the halved form is a lower bound.
    const double hull_from_max = upper / n;
    st.push_back(identity("111.hull_support", r.v1_hull, hull_from_max));
    st.push_back(identity("111.identity", s, hull_from_max - r.v1_min));
    st.push_back(inequality("111.halved", s, (r.v1_hull - r.v1_min) / 2.0));
    st.push_back(inequality("111.inclusion", (r.v1_hull - r.v1_min) / 2.0, (r.v1_hull - vk) / 2.0));
    st.push_back(inequality("111.intersection_support", r.v1_min, r.v1_intersection));

    const double root_hull = std::sqrt(r.volume_hull);
    st.push_back(inequality("bbb.mixed_volume", r.v1_hull - vk, root_hull - std::sqrt(vk)));
    st.push_back(inequality("bbb.mean_value", root_hull - std::sqrt(vk),
                            (r.volume_hull - vk) / (n * std::pow(r.volume_hull, (n - 1.0) / n))));
    st.push_back(inequality("ccc", std::pow(r.gamma_p, n), r.volume_hull));
    st.push_back(inequality("ddd", r.v1_hull - vk,
                            (r.volume_hull - vk) / (n * std::pow(r.gamma_p, n - 1.0))));

    const double gl_minus_k = gl.area() - meet.area();
    const double l_meet_k = planar::intersection(l, k).area();
    const double l_minus_k = vl - l_meet_k;
    const double shell_minus_k = (vl - gl.area()) - (l_meet_k - meet.area());
    st.push_back(inequality("eee.inclusion", r.volume_hull - vk, gl_minus_k));
    st.push_back(identity("eee.split", gl_minus_k, l_minus_k - shell_minus_k));
    st.push_back(inequality("eee.shell_bound", vl - gl.area(), shell_minus_k));

    const double gp_pow = std::pow(r.gamma_p, 2.0 * (n - 1.0));
    const double sym = planar::symmetric_difference_area(k, l);
    const double fff_rhs = (p - 1.0) / (2.0 * n * n * gp_pow) * l_minus_k * l_minus_k;
    st.push_back(inequality("fff", delta, fff_rhs));
    st.push_back(identity("fff.symmetric_difference", fff_rhs, (p - 1.0) / (8.0 * n * n * gp_pow) * sym * sym));

    if (delta <= (p - 1.0) / (32.0 * (n - 1.0) * (n - 1.0))) {
        st.push_back(inequality("case.small_deficit", 1.0 + 1.0 / (2.0 * (n - 1.0)), r.gamma_p));
    }
    st.push_back(inequality("theorem1", delta, (p - 1.0) / (128.0 * n * n) * r.asymmetry * r.asymmetry));
    return r;
}

} // namespace lpstab::mixed
