#pragma once

#include <span>
#include <vector>

#include "archprog/geometry.hpp"

namespace archprog {

/// Planar region bounded by one outer ring (counter-clockwise) and zero or
/// more hole rings (clockwise).
struct PolygonWithHoles {
    Polygon2D outer;
    std::vector<Polygon2D> holes;

    double area() const;
};

// Polygon booleans. Inputs may have either orientation; outputs follow the
// PolygonWithHoles convention with collinear and duplicate vertices removed.

std::vector<PolygonWithHoles> polygon_difference(const Polygon2D& a, std::span<const Polygon2D> subtract);
std::vector<PolygonWithHoles> polygon_intersection(const Polygon2D& a, const Polygon2D& b);
std::vector<PolygonWithHoles> polygon_union(std::span<const Polygon2D> parts);

/// Area of the part of `a` lying outside `b`.
double area_outside(const Polygon2D& a, const Polygon2D& b);
/// Area of a ∩ b.
double overlap_area(const Polygon2D& a, const Polygon2D& b);

/// Pieces of `poly` on the left of the directed line (origin, origin + dir).
std::vector<Polygon2D> clip_left_of_line(const Polygon2D& poly, Vec2 origin, Vec2 dir);

} // namespace archprog
