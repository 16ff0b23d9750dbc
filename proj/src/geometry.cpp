#include "archprog/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace archprog {

double signed_area(std::span<const Vec2> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) twice += cross(ring[j], ring[i]);
    return 0.5 * twice;
}

double perimeter(const Polygon2D& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += norm(p.next(i) - p[i]);
    return total;
}

Polygon2D reversed(const Polygon2D& p) {
    Polygon2D out;
    out.vertices.reserve(p.size());
    if (p.size() == 0) return out;
    out.vertices.push_back(p[0]);
    for (std::size_t i = p.size() - 1; i > 0; --i) out.vertices.push_back(p[i]);
    return out;
}

Polygon2D to_ccw(const Polygon2D& p) {
    return signed_area(p) < 0.0 ? reversed(p) : p;
}

namespace {

bool on_segment(Vec2 p, Vec2 a, Vec2 b, double eps) {
    return distance_to_segment(p, a, b) <= eps;
}

int sign(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

} // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps) {
    const int o1 = sign(orient(a, b, c), eps * eps);
    const int o2 = sign(orient(a, b, d), eps * eps);
    const int o3 = sign(orient(c, d, a), eps * eps);
    const int o4 = sign(orient(c, d, b), eps * eps);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return on_segment(c, a, b, eps) || on_segment(d, a, b, eps) || on_segment(a, c, d, eps) ||
           on_segment(b, c, d, eps);
}

std::optional<Vec2> line_intersection(Vec2 p, Vec2 u, Vec2 q, Vec2 v) {
    const double denom = cross(u, v);
    if (std::abs(denom) <= 1e-15 * norm(u) * norm(v)) return std::nullopt;
    const double t = cross(q - p, v) / denom;
    return p + u * t;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return a;
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return a + ab * t;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    return norm(p - closest_point_on_segment(p, a, b));
}

double distance_to_boundary(Vec2 p, const Polygon2D& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, distance_to_segment(p, poly[i], poly.next(i)));
    return best;
}

bool is_simple(const Polygon2D& p, double eps) {
    const std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (norm(p.next(i) - p[i]) <= eps) return false;
    if (std::abs(signed_area(p)) <= eps * eps) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i];
        const Vec2 b = p.next(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 c = p[j];
            const Vec2 d = p.next(j);
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent) {
                if (segments_intersect(a, b, c, d, eps)) return false;
                continue;
            }
            // Adjacent edges share exactly one endpoint; they must not fold back onto each other.
            const Vec2 shared = (j == i + 1) ? b : a;
            const Vec2 u = ((j == i + 1) ? a : b) - shared;
            const Vec2 w = ((j == i + 1) ? d : c) - shared;
            if (std::abs(cross(u, w)) <= eps * std::max(norm(u), norm(w)) && dot(u, w) > 0.0) return false;
        }
    }
    return true;
}

bool point_in_polygon(Vec2 p, const Polygon2D& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

std::vector<double> vertex_angles_deg(const Polygon2D& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2 u = p.prev(i) - p[i];
        const Vec2 w = p.next(i) - p[i];
        const double angle = std::atan2(std::abs(cross(u, w)), dot(u, w));
        out.push_back(angle * 180.0 / std::numbers::pi);
    }
    return out;
}

double edge_length_ratio(const Polygon2D& p) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double len = norm(p.next(i) - p[i]);
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    }
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

Polygon2D remove_duplicates(const Polygon2D& p, double eps) {
    Polygon2D out;
    for (const Vec2& v : p.vertices)
        if (out.vertices.empty() || norm(v - out.vertices.back()) > eps) out.vertices.push_back(v);
    while (out.size() > 1 && norm(out.vertices.front() - out.vertices.back()) <= eps) out.vertices.pop_back();
    return out;
}

Polygon2D remove_collinear(const Polygon2D& p, double eps) {
    Polygon2D cur = remove_duplicates(p, eps);
    bool changed = true;
    while (changed && cur.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const Vec2 a = cur.prev(i);
            const Vec2 b = cur[i];
            const Vec2 c = cur.next(i);
            const Vec2 u = b - a;
            const Vec2 w = c - b;
            if (std::abs(cross(u, w)) <= eps * std::max(norm(u), norm(w)) && dot(u, w) > 0.0) {
                cur.vertices.erase(cur.vertices.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return cur;
}

double diameter(const Polygon2D& p) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, norm(p[j] - p[i]));
    return best;
}

double triangle_area(Vec3 a, Vec3 b, Vec3 c) { return 0.5 * norm(cross(b - a, c - a)); }

// Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_point_on_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;
    const double d1 = dot(ab, ap);
    const double d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp);
    const double d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp);
    const double d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

} // namespace archprog
