#pragma once

#include <vector>

#include "archprog/dsl.hpp"
#include "archprog/mesh.hpp"

namespace archprog {

/// A layer positioned in space: it sits on its parent's top plane, or on
/// the ground plane for roots.
struct PlacedLayer {
    LayerLabel label = 1;
    LayerLabel parent = kGround;
    double z_base = 0.0;
    double z_top = 0.0;
    Polygon2D contour; ///< counter-clockwise
};

std::vector<PlacedLayer> place_layers(const Program& p);

/// Geometry compiler: extrudes every layer into a prism, stacks children on
/// their parent's top plane and removes child footprints from the parent's
/// top cap. Roots get a bottom cap at ground level; a child reaching beyond
/// its parent gets a bottom cap under the overhanging part only. Coincident
/// vertices are welded and T-junctions split so that nested layouts yield a
/// closed mesh. Throws GeometryError for an empty program or a degenerate
/// contour.
Mesh compile(const Program& p);

} // namespace archprog
