#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace archprog {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double squared_distance(Vec3 a, Vec3 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Closed 2D polygon given by its vertex ring (the closing edge is implicit).
struct Polygon2D {
    std::vector<Vec2> vertices;

    friend bool operator==(const Polygon2D&, const Polygon2D&) = default;
    std::size_t size() const { return vertices.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices[i]; }
    const Vec2& next(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
    const Vec2& prev(std::size_t i) const { return vertices[(i + vertices.size() - 1) % vertices.size()]; }
};

/// Tolerance for coincidence and point-on-edge predicates.
inline constexpr double kGeomEps = 1e-9;

double signed_area(std::span<const Vec2> ring);
inline double signed_area(const Polygon2D& p) { return signed_area(p.vertices); }
double perimeter(const Polygon2D& p);
Polygon2D reversed(const Polygon2D& p);
/// Reverses the ring (keeping the first vertex) when it is clockwise.
Polygon2D to_ccw(const Polygon2D& p);

/// Closed-segment intersection test (touching counts).
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps = kGeomEps);
/// Intersection of the infinite lines (p, p + u) and (q, q + v); empty when parallel.
std::optional<Vec2> line_intersection(Vec2 p, Vec2 u, Vec2 q, Vec2 v);

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_boundary(Vec2 p, const Polygon2D& poly);

/// True when the ring has >= 3 vertices, no repeated consecutive vertex, no
/// non-zero-length edge overlap and no intersection between non-adjacent edges.
bool is_simple(const Polygon2D& p, double eps = kGeomEps);

/// Crossing-number point-in-polygon test (boundary points are unspecified).
bool point_in_polygon(Vec2 p, const Polygon2D& poly);

/// Unsigned angle between the two edges at each vertex, in degrees within
/// [0, 180]: interior angle theta folded to min(theta, 360 - theta).
std::vector<double> vertex_angles_deg(const Polygon2D& p);
/// Longest edge length divided by shortest edge length (inf for a zero-length edge).
double edge_length_ratio(const Polygon2D& p);

/// Drops consecutive duplicate vertices (within eps), including the wrap-around pair.
Polygon2D remove_duplicates(const Polygon2D& p, double eps = kGeomEps);
/// Drops vertices whose neighbours make a straight (180 degree) angle.
Polygon2D remove_collinear(const Polygon2D& p, double eps = kGeomEps);

/// Largest distance between two vertices.
double diameter(const Polygon2D& p);

// 3D helpers.
double triangle_area(Vec3 a, Vec3 b, Vec3 c);
Vec3 closest_point_on_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c);
inline double distance_to_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
    return norm(p - closest_point_on_triangle(p, a, b, c));
}

} // namespace archprog
