#include "archprog/clip.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <tuple>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

namespace archprog {

namespace bg = boost::geometry;

namespace {

// The overlay runs on integer coordinates (centred and scaled), where Boost's
// predicates are exact; floating-point input lets near-touching rings come
// out as invalid polygons (a hole sharing an edge with its shell).
using BPoint = bg::model::d2::point_xy<std::int64_t>;
// Counter-clockwise, closed rings.
using BPolygon = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPolygon>;

// Output vertices are rounded to the integer grid. Each one is put back on
// the input vertex it came from, or recomputed from the input edges it lies on.
class Snapper {
public:
    Snapper() = default;
    Snapper(std::initializer_list<const Polygon2D*> inputs) {
        for (const Polygon2D* p : inputs) add(*p);
    }

    void add(const Polygon2D& p) {
        for (const Vec2& v : p.vertices) {
            lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y)};
            hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y)};
        }
        centre_ = (lo_ + hi_) * 0.5;
        // Boost 1.74 forms triple products of int64 coordinate differences,
        // so scaled coordinates must stay well below 2^21.
        const double half = std::max(hi_.x - lo_.x, hi_.y - lo_.y) / 2.0;
        scale_ = std::min(1e6, 524288.0 / std::max(half, 1e-3));
        tol_ = 2.0 / scale_;
        for (std::size_t i = 0; i < p.size(); ++i) {
            points_.push_back(p[i]);
            edges_.push_back({p[i], p.next(i)});
        }
    }

    /// Scale must be fixed before any conversion, so add all inputs first.
    BPolygon to_boost(const Polygon2D& p) const {
        const Polygon2D ccw = to_ccw(p);
        BPolygon out;
        for (const Vec2& v : ccw.vertices) out.outer().push_back(grid(v));
        if (!ccw.vertices.empty()) out.outer().push_back(grid(ccw[0]));
        bg::correct(out);
        return out;
    }

    Vec2 unscaled(const BPoint& p) const {
        return {static_cast<double>(p.x()) / scale_ + centre_.x, static_cast<double>(p.y()) / scale_ + centre_.y};
    }

    double area_scale() const { return scale_ * scale_; }

    Vec2 operator()(Vec2 q) const {
        const double tol = tol_;
        for (const Vec2& v : points_)
            if (std::abs(v.x - q.x) <= tol && std::abs(v.y - q.y) <= tol) return v;
        const std::array<Vec2, 2>* first = nullptr;
        for (const auto& e : edges_) {
            if (distance_to_segment(q, e[0], e[1]) > tol) continue;
            if (!first) {
                first = &e;
                continue;
            }
            const Vec2 u = (*first)[1] - (*first)[0];
            const Vec2 w = e[1] - e[0];
            if (std::abs(cross(u, w)) <= kGeomEps * norm(u) * norm(w)) continue;
            // Order the pair so both operands of an equal crossing give bit-identical output.
            const bool swap = std::tie(e[0].x, e[0].y, e[1].x, e[1].y) <
                              std::tie((*first)[0].x, (*first)[0].y, (*first)[1].x, (*first)[1].y);
            const auto& a = swap ? e : *first;
            const auto& b = swap ? *first : e;
            if (auto hit = line_intersection(a[0], a[1] - a[0], b[0], b[1] - b[0])) return *hit;
        }
        if (first) return closest_point_on_segment(q, (*first)[0], (*first)[1]);
        return q;
    }

private:
    BPoint grid(Vec2 v) const {
        return {static_cast<std::int64_t>(std::llround((v.x - centre_.x) * scale_)),
                static_cast<std::int64_t>(std::llround((v.y - centre_.y) * scale_))};
    }

    Vec2 lo_{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi_{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Vec2 centre_{0.0, 0.0};
    double scale_ = 1e6;
    double tol_ = 2e-6;
    std::vector<Vec2> points_;
    std::vector<std::array<Vec2, 2>> edges_;
};

template <typename Ring>
Polygon2D from_ring(const Ring& ring, const Snapper& snap) {
    Polygon2D out;
    for (const auto& pt : ring) out.vertices.push_back(snap(snap.unscaled(pt)));
    if (out.size() > 1 && out.vertices.front() == out.vertices.back()) out.vertices.pop_back();
    return remove_collinear(out);
}

std::vector<PolygonWithHoles> from_multi(const BMulti& multi, const Snapper& snap) {
    std::vector<PolygonWithHoles> out;
    for (const BPolygon& poly : multi) {
        PolygonWithHoles piece;
        piece.outer = to_ccw(from_ring(poly.outer(), snap));
        if (piece.outer.size() < 3 || std::abs(signed_area(piece.outer)) <= kGeomEps * kGeomEps) continue;
        for (const auto& inner : poly.inners()) {
            Polygon2D hole = from_ring(inner, snap);
            if (hole.size() < 3 || std::abs(signed_area(hole)) <= kGeomEps * kGeomEps) continue;
            piece.holes.push_back(reversed(to_ccw(hole)));
        }
        out.push_back(std::move(piece));
    }
    return out;
}

BMulti to_multi(const BPolygon& p) {
    BMulti m;
    m.push_back(p);
    return m;
}

} // namespace

double PolygonWithHoles::area() const {
    double a = signed_area(outer);
    for (const Polygon2D& h : holes) a -= std::abs(signed_area(h));
    return a;
}

std::vector<PolygonWithHoles> polygon_difference(const Polygon2D& a, std::span<const Polygon2D> subtract) {
    Snapper snap{&a};
    for (const Polygon2D& s : subtract) snap.add(s);
    BMulti current = to_multi(snap.to_boost(a));
    for (const Polygon2D& s : subtract) {
        BMulti next;
        bg::difference(current, snap.to_boost(s), next);
        current = std::move(next);
    }
    return from_multi(current, snap);
}

std::vector<PolygonWithHoles> polygon_intersection(const Polygon2D& a, const Polygon2D& b) {
    const Snapper snap{&a, &b};
    BMulti out;
    bg::intersection(snap.to_boost(a), snap.to_boost(b), out);
    return from_multi(out, snap);
}

std::vector<PolygonWithHoles> polygon_union(std::span<const Polygon2D> parts) {
    Snapper snap;
    for (const Polygon2D& p : parts) snap.add(p);
    BMulti current;
    for (const Polygon2D& p : parts) {
        BMulti next;
        bg::union_(current, snap.to_boost(p), next);
        current = std::move(next);
    }
    return from_multi(current, snap);
}

double area_outside(const Polygon2D& a, const Polygon2D& b) {
    const Snapper snap{&a, &b};
    BMulti out;
    bg::difference(snap.to_boost(a), snap.to_boost(b), out);
    return static_cast<double>(bg::area(out)) / snap.area_scale();
}

double overlap_area(const Polygon2D& a, const Polygon2D& b) {
    const Snapper snap{&a, &b};
    BMulti out;
    bg::intersection(snap.to_boost(a), snap.to_boost(b), out);
    return static_cast<double>(bg::area(out)) / snap.area_scale();
}

std::vector<Polygon2D> clip_left_of_line(const Polygon2D& poly, Vec2 origin, Vec2 dir) {
    // A quad reaching past every vertex stands in for the half-plane.
    double extent = 0.0;
    for (const Vec2& v : poly.vertices) extent = std::max(extent, norm(v - origin));
    extent = 2.0 * extent + 1e-6;
    const double len = norm(dir);
    const Vec2 u = dir * (extent / len);
    const Vec2 left{-u.y, u.x};
    Polygon2D half;
    half.vertices = {origin - u, origin + u, origin + u + left, origin - u + left};
    std::vector<Polygon2D> out;
    for (PolygonWithHoles& piece : polygon_intersection(poly, half)) {
        // A convex cut of a simple polygon cannot create holes.
        out.push_back(std::move(piece.outer));
    }
    return out;
}

} // namespace archprog
