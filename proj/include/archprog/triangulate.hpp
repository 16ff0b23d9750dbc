#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "archprog/geometry.hpp"

namespace archprog {

/// Triangles over a point list: the outer ring's vertices followed by each
/// hole's vertices, in input order. A vertex of one ring lying inside an
/// edge of another is also inserted into that edge, in ring order.
struct Triangulation {
    std::vector<Vec2> points;
    /// Counter-clockwise index triples into `points`.
    std::vector<std::array<std::uint32_t, 3>> triangles;

    double area() const;
};

/// Ear-clipping triangulation of a polygon with holes. Holes are linked to
/// the outer ring through bridge edges first. Rings may have either
/// orientation. Zero-area ears are dropped rather than emitted. Throws
/// GeometryError when the rings cannot be fully triangulated.
Triangulation triangulate_with_holes(const Polygon2D& outer, std::span<const Polygon2D> holes = {});

} // namespace archprog
