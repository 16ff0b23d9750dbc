#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "archprog/dsl.hpp"

namespace archprog {

inline constexpr double kDefaultSnapThreshold = 0.04;

enum class SnapAction : std::uint8_t { None, ToVertex, ToEdge };

const char* snap_action_name(SnapAction a);

struct SnapRecord {
    /// Label the layer gets in tree_to_program's breadth-first numbering.
    LayerLabel layer = 1;
    std::size_t vertex = 0;
    SnapAction action = SnapAction::None;
    Vec2 target;
    double displacement = 0.0;
};

struct SnapReport {
    double threshold = kDefaultSnapThreshold;
    /// One record per child vertex, in layer then vertex order.
    std::vector<SnapRecord> records;
    /// Layers whose snapped contour was not simple and were restored.
    std::vector<LayerLabel> rolled_back;

    std::size_t count(SnapAction a) const;
    std::string to_json() const;
};

/// Snaps every child contour vertex onto its (already refined) parent
/// contour, parents first: to the nearest parent vertex when within
/// `threshold`, otherwise to the foot on the nearest parent edge when within
/// `threshold`, otherwise not at all. A vertex within 1e-12 of its target is
/// left alone, and so is an edge snap whose foot would land within
/// `threshold` of a parent vertex the original point is not within
/// `threshold` of (a later pass would move it again). Repeated consecutive
/// vertices produced by snapping are merged. A layer whose result is not a
/// simple polygon of the same orientation is restored and listed in
/// `rolled_back`. Throws GeometryError for a negative threshold.
ArchTree refine_tree(const ArchTree& t, double threshold = kDefaultSnapThreshold, SnapReport* report = nullptr);

/// refine_tree through program_to_tree / tree_to_program.
Program refine_program(const Program& p, double threshold = kDefaultSnapThreshold, SnapReport* report = nullptr);

} // namespace archprog
