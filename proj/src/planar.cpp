#include "lpstab/planar.hpp"

#include <algorithm>
#include <deque>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

namespace lpstab::planar {

namespace {

constexpr double kSnap = 1e-12;

std::string describe(Vec2 v) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << v.x << ", " << v.y << ")";
    return os.str();
}

// Distance of b from the chord a -> c, positive for a left turn. Stays well
// conditioned when one of the two edges is very short, unlike the turn sine.
double chord_height(Vec2 a, Vec2 b, Vec2 c) {
    const double base = norm(c - a);
    if (base == 0.0) return 0.0;
    return cross(b - a, c - b) / base;
}

double shoelace(const std::vector<Vec2>& v) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * twice;
}

Vec2 line_intersection(Vec2 u, double hu, Vec2 w, double hw) {
    const double det = cross(u, w);
    return {(hu * w.y - u.y * hw) / det, (u.x * hw - hu * w.x) / det};
}

} // namespace

// ---------------------------------------------------------------------------
// Polygon

Polygon Polygon::from_vertices(std::span<const Vec2> points) {
    using Kind = GeometryError::Kind;
    std::vector<Vec2> pts;
    pts.reserve(points.size());
    std::set<std::pair<double, double>> seen;
    for (const Vec2& v : points) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw GeometryError(Kind::DegenerateInput, "vertex " + describe(v) + " is not finite");
        if (seen.emplace(v.x, v.y).second) pts.push_back(v);
    }

    double scale = 1.0;
    for (const Vec2& v : pts) scale = std::max(scale, norm(v));
    const double snap = kSnap * scale;

    // Consecutive near-duplicates (cyclic).
    std::vector<Vec2> clean;
    clean.reserve(pts.size());
    for (const Vec2& v : pts) {
        if (clean.empty() || norm(v - clean.back()) > snap) clean.push_back(v);
    }
    while (clean.size() > 1 && norm(clean.front() - clean.back()) <= snap) clean.pop_back();

    if (clean.size() < 3)
        throw GeometryError(Kind::DegenerateInput, "fewer than 3 distinct vertices");
    const double signed_area = shoelace(clean);
    if (std::abs(signed_area) <= snap * snap)
        throw GeometryError(Kind::DegenerateInput, "vertices enclose zero area");
    if (signed_area < 0.0) std::reverse(clean.begin(), clean.end());

    // Drop collinear middle vertices; a reversal (spike) is a convexity failure.
    bool changed = true;
    while (changed && clean.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < clean.size(); ++i) {
            const std::size_t n = clean.size();
            const Vec2 a = clean[(i + n - 1) % n];
            const Vec2 b = clean[i];
            const Vec2 c = clean[(i + 1) % n];
            if (std::abs(chord_height(a, b, c)) <= snap && dot(b - a, c - b) > 0.0) {
                clean.erase(clean.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (clean.size() < 3) throw GeometryError(Kind::DegenerateInput, "all vertices collinear");

    const std::size_t n = clean.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = clean[(i + n - 1) % n];
        const Vec2 b = clean[i];
        const Vec2 c = clean[(i + 1) % n];
        if (chord_height(a, b, c) <= snap) {
            throw GeometryError(Kind::NotConvex, "not convex at vertex triple " + describe(a) + ", " +
                                                     describe(b) + ", " + describe(c));
        }
        turning += std::atan2(cross(b - a, c - b), dot(b - a, c - b));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
        throw GeometryError(Kind::NotConvex, "boundary winds more than once");

    Polygon poly;
    poly.vertices_ = std::move(clean);
    poly.normals_.reserve(n);
    poly.lengths_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = poly.vertices_[(i + 1) % n] - poly.vertices_[i];
        const double len = norm(e);
        const Vec2 normal{e.y / len, -e.x / len};
        if (dot(poly.vertices_[i], normal) <= snap) {
            throw GeometryError(Kind::OriginNotInterior,
                                "origin not strictly inside: edge " + describe(poly.vertices_[i]) +
                                    " -> " + describe(poly.vertices_[(i + 1) % n]));
        }
        poly.normals_.push_back(normal);
        poly.lengths_.push_back(len);
    }
    poly.area_ = shoelace(poly.vertices_);
    return poly;
}

double Polygon::support(Vec2 u) const noexcept {
    double best = dot(vertices_.front(), u);
    for (const Vec2& v : vertices_) best = std::max(best, dot(v, u));
    return best;
}

double Polygon::perimeter() const noexcept {
    double sum = 0.0;
    for (double l : lengths_) sum += l;
    return sum;
}

double Polygon::circumradius() const noexcept {
    double r = 0.0;
    for (const Vec2& v : vertices_) r = std::max(r, norm(v));
    return r;
}

Polygon Polygon::scaled(double factor) const {
    if (!std::isfinite(factor) || factor <= 0.0)
        throw GeometryError(GeometryError::Kind::InvalidBody, "dilation factor must be positive");
    Polygon out = *this;
    for (Vec2& v : out.vertices_) v = factor * v;
    for (double& l : out.lengths_) l *= factor;
    out.area_ = shoelace(out.vertices_);
    return out;
}

Polygon Polygon::translated(Vec2 offset) const {
    std::vector<Vec2> moved = vertices_;
    for (Vec2& v : moved) v = v + offset;
    return from_vertices(moved);
}

bool Polygon::contains(Vec2 x, double slack) const noexcept {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (dot(x - vertices_[i], normals_[i]) > slack) return false;
    }
    return true;
}

Polygon polygon_from_vertices(std::span<const Vec2> points) { return Polygon::from_vertices(points); }

double volume(const Polygon& p) noexcept { return p.area(); }

double SurfaceMeasure::total_mass() const {
    double sum = 0.0;
    for (const auto& a : atoms) sum += a.weight;
    return sum;
}

double SurfaceMeasure::closure_defect() const {
    Vec2 sum;
    for (const auto& a : atoms) sum = sum + a.weight * a.normal;
    return norm(sum);
}

SurfaceMeasure surface_area_measure(const Polygon& p) {
    SurfaceMeasure m;
    m.atoms.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m.atoms.push_back({p.normals()[i], p.edge_lengths()[i]});
    return m;
}

// ---------------------------------------------------------------------------
// Support oracles

struct SupportOracle::Node {
    std::variant<Polygon, BallData, DilateData, LpSumData> data;
};

SupportOracle SupportOracle::polygon(Polygon poly) {
    return SupportOracle(std::make_shared<const Node>(Node{std::move(poly)}));
}

SupportOracle SupportOracle::ball(Vec2 center, double radius) {
    if (!std::isfinite(radius) || radius <= 0.0 || !std::isfinite(center.x) || !std::isfinite(center.y))
        throw GeometryError(GeometryError::Kind::InvalidBody, "ball needs a finite center and positive radius");
    if (norm(center) >= radius - kSnap * std::max(1.0, radius))
        throw GeometryError(GeometryError::Kind::OriginNotInterior,
                            "ball centered at " + describe(center) + " does not contain the origin");
    return SupportOracle(std::make_shared<const Node>(Node{BallData{center, radius}}));
}

SupportOracle SupportOracle::dilate(double factor, SupportOracle inner) {
    if (!std::isfinite(factor) || factor <= 0.0)
        throw GeometryError(GeometryError::Kind::InvalidBody, "dilation factor must be positive");
    return SupportOracle(std::make_shared<const Node>(Node{DilateData{factor, std::move(inner)}}));
}

SupportOracle SupportOracle::lp_sum(double p, SupportOracle left, SupportOracle right) {
    if (!std::isfinite(p) || p < 1.0)
        throw GeometryError(GeometryError::Kind::InvalidBody, "L_p combination requires p >= 1");
    return SupportOracle(
        std::make_shared<const Node>(Node{LpSumData{p, std::move(left), std::move(right)}}));
}

SupportOracle::Kind SupportOracle::kind() const noexcept { return static_cast<Kind>(node_->data.index()); }

double SupportOracle::support(Vec2 u) const {
    if (std::abs(norm(u) - 1.0) > kSnap)
        throw GeometryError(GeometryError::Kind::NonUnitDirection, "direction " + describe(u) + " is not a unit vector");
    return evaluate(u);
}

double SupportOracle::evaluate(Vec2 u) const noexcept {
    struct Visitor {
        Vec2 u;
        double operator()(const Polygon& p) const { return p.support(u); }
        double operator()(const BallData& b) const { return dot(b.center, u) + b.radius; }
        double operator()(const DilateData& d) const { return d.factor * d.inner.evaluate(u); }
        double operator()(const LpSumData& s) const {
            const double a = s.left.evaluate(u);
            const double b = s.right.evaluate(u);
            if (s.p == 1.0) return a + b;
            const double hi = std::max(a, b);
            const double ratio = std::min(a, b) / hi;
            return hi * std::exp(std::log1p(std::pow(ratio, s.p)) / s.p);
        }
    };
    return std::visit(Visitor{u}, node_->data);
}

const Polygon& SupportOracle::as_polygon() const { return std::get<Polygon>(node_->data); }
const BallData& SupportOracle::as_ball() const { return std::get<BallData>(node_->data); }
const DilateData& SupportOracle::as_dilate() const { return std::get<DilateData>(node_->data); }
const LpSumData& SupportOracle::as_lp_sum() const { return std::get<LpSumData>(node_->data); }

std::vector<Vec2> SupportOracle::edge_normals() const {
    switch (kind()) {
    case Kind::Polygon: return as_polygon().normals();
    case Kind::Ball: return {};
    case Kind::Dilate: return as_dilate().inner.edge_normals();
    case Kind::LpSum: {
        auto out = as_lp_sum().left.edge_normals();
        auto right = as_lp_sum().right.edge_normals();
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }
    }
    return {};
}

bool SupportOracle::is_polygonal() const noexcept {
    switch (kind()) {
    case Kind::Polygon: return true;
    case Kind::Dilate: return as_dilate().inner.is_polygonal();
    default: return false;
    }
}

double support(const SupportOracle& body, Vec2 u) { return body.support(u); }

SupportOracle lp_combination(SupportOracle a, SupportOracle b, double p) {
    return SupportOracle::lp_sum(p, std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Discretization

std::vector<double> direction_angles(std::size_t count, std::span<const Vec2> extra) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> exact;
    exact.reserve(extra.size());
    for (const Vec2& v : extra) {
        double a = std::atan2(v.y, v.x);
        if (a < 0.0) a += two_pi;
        if (a >= two_pi) a -= two_pi;
        exact.push_back(a);
    }
    std::sort(exact.begin(), exact.end());

    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = two_pi * static_cast<double>(i) / static_cast<double>(count);

    // Merge, preferring the exact angle when a grid angle collides with it.
    std::vector<double> out;
    out.reserve(count + exact.size());
    std::size_t i = 0;
    std::size_t j = 0;
    auto push = [&](double a, bool is_exact) {
        if (!out.empty() && a - out.back() <= kSnap) {
            if (is_exact) out.back() = a;
            return;
        }
        out.push_back(a);
    };
    while (i < grid.size() || j < exact.size()) {
        if (j == exact.size() || (i < grid.size() && grid[i] < exact[j])) {
            push(grid[i++], false);
        } else {
            push(exact[j++], true);
        }
    }
    if (out.size() > 1 && out.front() + two_pi - out.back() <= kSnap) out.pop_back();
    return out;
}

namespace {

std::vector<Vec2> monotone_chain(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& v : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], v - hull[k - 2]) <= 0.0) --k;
        hull[k++] = v;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Clipping and halfplane sweeps place vertices with errors up to ~1e-10 when two
// lines are nearly parallel (an exact edge normal right next to a grid angle),
// which can flip the orientation of very short edges. Fold near-coincident
// points and re-hull so the result is convex by construction.
std::vector<Vec2> tidy_convex(std::vector<Vec2> verts) {
    double scale = 1.0;
    for (const Vec2& v : verts) scale = std::max(scale, norm(v));
    const double tol = 1e-9 * scale;
    std::vector<Vec2> out;
    out.reserve(verts.size());
    for (const Vec2& v : verts) {
        if (out.empty() || norm(v - out.back()) > tol) out.push_back(v);
    }
    while (out.size() > 1 && norm(out.front() - out.back()) <= tol) out.pop_back();
    return monotone_chain(std::move(out));
}

} // namespace

Polygon halfplane_polygon(std::span<const double> angles, std::span<const double> values) {
    const std::size_t m = angles.size();
    if (m < 3 || values.size() != m)
        throw GeometryError(GeometryError::Kind::DegenerateInput, "need at least 3 halfplanes");
    for (std::size_t k = 0; k < m; ++k) {
        const double next = k + 1 < m ? angles[k + 1] : angles[0] + 2.0 * std::numbers::pi;
        if (next - angles[k] >= std::numbers::pi)
            throw GeometryError(GeometryError::Kind::DegenerateInput, "halfplane directions leave a gap of pi or more");
    }

    std::vector<Vec2> dirs(m);
    double scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        dirs[k] = unit_at(angles[k]);
        scale = std::max(scale, std::abs(values[k]));
    }
    const double tol = 1e-13 * std::max(scale, 1.0);
    auto vertex = [&](std::size_t a, std::size_t b) { return line_intersection(dirs[a], values[a], dirs[b], values[b]); };
    auto outside = [&](std::size_t k, Vec2 x) { return dot(dirs[k], x) > values[k] + tol; };

    std::deque<std::size_t> dq;
    for (std::size_t k = 0; k < m; ++k) {
        while (dq.size() >= 2 && outside(k, vertex(dq[dq.size() - 2], dq.back()))) dq.pop_back();
        while (dq.size() >= 2 && outside(k, vertex(dq[0], dq[1]))) dq.pop_front();
        dq.push_back(k);
    }
    while (dq.size() >= 3 && outside(dq.front(), vertex(dq[dq.size() - 2], dq.back()))) dq.pop_back();
    while (dq.size() >= 3 && outside(dq.back(), vertex(dq[0], dq[1]))) dq.pop_front();

    std::vector<Vec2> verts;
    verts.reserve(dq.size());
    for (std::size_t i = 0; i < dq.size(); ++i) verts.push_back(vertex(dq[i], dq[(i + 1) % dq.size()]));
    return Polygon::from_vertices(tidy_convex(std::move(verts)));
}

Polygon support_polytope(const SupportOracle& body, std::size_t count) {
    if (count < 8) throw GeometryError(GeometryError::Kind::DegenerateInput, "support_polytope needs at least 8 directions");
    const auto normals = body.edge_normals();
    const auto angles = direction_angles(count, normals);
    std::vector<double> values(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) values[k] = body.evaluate(unit_at(angles[k]));
    return halfplane_polygon(angles, values);
}

// ---------------------------------------------------------------------------
// Boolean operations

Polygon convex_hull_union(const Polygon& p, const Polygon& q) {
    std::vector<Vec2> pts = p.vertices();
    pts.insert(pts.end(), q.vertices().begin(), q.vertices().end());
    return Polygon::from_vertices(monotone_chain(std::move(pts)));
}

Polygon intersection(const Polygon& p, const Polygon& q) {
    std::vector<Vec2> poly = p.vertices();
    const auto& qv = q.vertices();
    for (std::size_t j = 0; j < q.size() && !poly.empty(); ++j) {
        const Vec2 n = q.normals()[j];
        const double h = dot(qv[j], n);
        std::vector<Vec2> next;
        next.reserve(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 a = poly[i];
            const Vec2 b = poly[(i + 1) % poly.size()];
            const double da = dot(a, n) - h;
            const double db = dot(b, n) - h;
            if (da <= 0.0) next.push_back(a);
            if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
                const double s = da / (da - db);
                next.push_back(a + s * (b - a));
            }
        }
        poly = std::move(next);
    }
    return Polygon::from_vertices(tidy_convex(std::move(poly)));
}

double symmetric_difference_area(const Polygon& p, const Polygon& q) {
    const double common = intersection(p, q).area();
    return std::max(0.0, p.area() + q.area() - 2.0 * common);
}

} // namespace lpstab::planar
