#pragma once

// Planar convex bodies: exact polygons plus lazily evaluated support functions.
//
// Every body contains the origin strictly in its interior, so support values
// are positive in every direction. Polygons are stored counterclockwise with
// no repeated or collinear vertices.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpstab::planar {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Default number of equally spaced directions used to discretize bodies.
inline constexpr std::size_t kDefaultDirections = 4096;

class GeometryError : public std::invalid_argument {
public:
    enum class Kind { NotConvex, OriginNotInterior, DegenerateInput, NonUnitDirection, InvalidBody };

    GeometryError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct SurfaceAtom {
    Vec2 normal;
    double weight = 0.0;
};

/// Atomic surface area measure of a polygon: one atom per edge.
struct SurfaceMeasure {
    std::vector<SurfaceAtom> atoms;

    [[nodiscard]] double total_mass() const;
    /// |sum weight * normal|, zero for a closed boundary.
    [[nodiscard]] double closure_defect() const;
};

class Polygon {
public:
    /// Validates and normalizes: removes duplicate points, reverses clockwise
    /// input, drops collinear middle vertices.
    /// Throws GeometryError (NotConvex, OriginNotInterior, DegenerateInput).
    static Polygon from_vertices(std::span<const Vec2> points);

    [[nodiscard]] const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    /// Outward unit normal of the edge from vertex i to vertex i+1.
    [[nodiscard]] const std::vector<Vec2>& normals() const noexcept { return normals_; }
    [[nodiscard]] const std::vector<double>& edge_lengths() const noexcept { return lengths_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }

    [[nodiscard]] double support(Vec2 u) const noexcept;
    [[nodiscard]] double area() const noexcept { return area_; }
    [[nodiscard]] double perimeter() const noexcept;
    /// Largest vertex norm.
    [[nodiscard]] double circumradius() const noexcept;

    [[nodiscard]] Polygon scaled(double factor) const;
    [[nodiscard]] Polygon translated(Vec2 offset) const;
    [[nodiscard]] bool contains(Vec2 x, double slack = 0.0) const noexcept;

private:
    Polygon() = default;

    std::vector<Vec2> vertices_;
    std::vector<Vec2> normals_;
    std::vector<double> lengths_;
    double area_ = 0.0;
};

[[nodiscard]] Polygon polygon_from_vertices(std::span<const Vec2> points);
[[nodiscard]] double volume(const Polygon& p) noexcept;
[[nodiscard]] SurfaceMeasure surface_area_measure(const Polygon& p);

struct BallData;
struct DilateData;
struct LpSumData;

/// A convex body given by its support function, built from polygons, balls,
/// dilations and Minkowski-Firey L_p sums. Immutable; copies share structure.
class SupportOracle {
public:
    enum class Kind { Polygon, Ball, Dilate, LpSum };

    static SupportOracle polygon(Polygon poly);
    /// Origin must lie strictly inside: |center| < radius.
    static SupportOracle ball(Vec2 center, double radius);
    static SupportOracle dilate(double factor, SupportOracle inner);
    static SupportOracle lp_sum(double p, SupportOracle left, SupportOracle right);

    [[nodiscard]] Kind kind() const noexcept;

    /// Checks |u| = 1 to 1e-12, throws GeometryError(NonUnitDirection) otherwise.
    [[nodiscard]] double support(Vec2 u) const;
    /// No direction check; for hot loops over generated unit vectors.
    [[nodiscard]] double evaluate(Vec2 u) const noexcept;

    [[nodiscard]] const Polygon& as_polygon() const;
    [[nodiscard]] const BallData& as_ball() const;
    [[nodiscard]] const DilateData& as_dilate() const;
    [[nodiscard]] const LpSumData& as_lp_sum() const;

    /// Edge normals of every polygon leaf, for exact discretization.
    [[nodiscard]] std::vector<Vec2> edge_normals() const;
    /// Whether the body is a polygon up to dilation (so its area is exact).
    [[nodiscard]] bool is_polygonal() const noexcept;

private:
    struct Node;
    explicit SupportOracle(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct BallData {
    Vec2 center;
    double radius = 0.0;
};

struct DilateData {
    double factor = 0.0;
    SupportOracle inner;
};

struct LpSumData {
    double p = 0.0;
    SupportOracle left;
    SupportOracle right;
};

[[nodiscard]] double support(const SupportOracle& body, Vec2 u);

/// Minkowski-Firey combination with support (h_A^p + h_B^p)^(1/p). Requires p >= 1.
[[nodiscard]] SupportOracle lp_combination(SupportOracle a, SupportOracle b, double p);

/// Equally spaced angles 2 pi i / count merged with the angles of `extra`
/// (deduplicated at 1e-12 rad), sorted in [0, 2 pi).
[[nodiscard]] std::vector<double> direction_angles(std::size_t count, std::span<const Vec2> extra = {});

/// Intersection of the halfplanes <x, u> <= h(u) over direction_angles(count,
/// edge normals of the body). Contains the body; exact for polygons.
[[nodiscard]] Polygon support_polytope(const SupportOracle& body, std::size_t count = kDefaultDirections);

/// Halfplane intersection for explicit (sorted, distinct) angles and values.
[[nodiscard]] Polygon halfplane_polygon(std::span<const double> angles, std::span<const double> values);

[[nodiscard]] Polygon convex_hull_union(const Polygon& p, const Polygon& q);
[[nodiscard]] Polygon intersection(const Polygon& p, const Polygon& q);
[[nodiscard]] double symmetric_difference_area(const Polygon& p, const Polygon& q);

} // namespace lpstab::planar
