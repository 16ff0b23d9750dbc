#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archprog/dsl.hpp"
#include "archprog/rng.hpp"

namespace archprog {

struct ContourValidatorSpec {
    double min_angle_deg = 20.0;
    double max_angle_deg = 160.0;
    double max_edge_ratio = 10.0; ///< longest / shortest must stay below this
    double min_area_ratio = 0.15;
    double max_area_ratio = 0.85;
    bool check_area = true;
    /// Child area allowed outside the parent.
    double containment_tol = 1e-9;
};

struct ValidationResult {
    std::vector<std::string> reasons;

    bool ok() const { return reasons.empty(); }
    explicit operator bool() const { return ok(); }
};

/// Quality filter for a child contour against its parent: simplicity, angles
/// (folded, so a 270 degree reflex corner counts as 90), edge ratio, area
/// ratio and containment. Boundary contact with the parent is allowed.
ValidationResult validate_contour(const Polygon2D& child, const Polygon2D& parent,
                                  const ContourValidatorSpec& spec = {});

enum class TreeTemplate : std::uint8_t { Single, Chain2, Chain3, Root2, Root2Child, Root3, Free };

inline constexpr std::size_t kTemplateCount = 7;

const char* template_name(TreeTemplate t);
std::optional<TreeTemplate> template_from_name(const std::string& name);

struct SynthConfig {
    std::uint64_t seed = 0;
    /// Indexed by TreeTemplate. The six fixed shapes are uniform; Free, which
    /// grows by max_layers / max_depth / m_weights, is off.
    std::array<double, kTemplateCount> template_weights{1, 1, 1, 1, 1, 1, 0};
    int max_layers = 8;
    int max_depth = 3;
    double height_lo = 0.1;
    double height_hi = 0.6;
    /// P(M = 1), P(M = 2), P(M = 3) for Free trees.
    std::array<double, 3> m_weights{0.5, 0.35, 0.15};
    /// Empty: synthetic footprints. Otherwise a JSONL footprint file.
    std::string footprint_file;
    ContourValidatorSpec validator;
    /// Contraction distance as a fraction of the parent diameter.
    double contract_lo = 0.05;
    double contract_hi = 0.3;
    int max_attempts = 64;
    int tree_retries = 32;
    int max_vertices = 32;

    /// Throws ConfigError describing the first invalid field.
    void check() const;
};

/// Polygons from a footprint JSONL file (`{"vertices": [[x, y], ...]}` per
/// line), each normalised into [-0.49, 0.49]^2 and snapped to bin centres.
std::vector<Polygon2D> load_footprints(const std::string& path);

/// Centres the bounding box at the origin, scales the longer side to
/// `extent`, snaps to bin centres and drops repeated and collinear vertices.
Polygon2D normalize_footprint(const Polygon2D& p, double extent = 0.98);

/// Snaps every vertex to the nearest bin centre, then removes repeated and
/// collinear vertices and restores counter-clockwise order.
Polygon2D snap_polygon(const Polygon2D& p);

/// Root footprint: a file polygon when `pool` is non-empty, otherwise a
/// synthetic rectangle, L, T or U (optionally with one chamfered corner).
/// Passes validate_contour against the unit square with the area rule off.
Polygon2D sample_root_contour(const SynthConfig& cfg, Rng& rng, std::span<const Polygon2D> pool = {});

/// Moves edge i of a counter-clockwise polygon inward by distances[i] and
/// rebuilds the vertices by intersecting neighbouring lines. Empty when an
/// edge collapses or flips, or the result is not simple.
std::optional<Polygon2D> offset_edges(const Polygon2D& parent, std::span<const double> distances);

/// One child by inward contraction of a random non-empty edge subset.
Polygon2D contract_child(const Polygon2D& parent, const SynthConfig& cfg, Rng& rng);

struct CutLine {
    Vec2 origin;
    Vec2 dir;
};

/// Cells of `parent` cut by every line.
std::vector<Polygon2D> bisect_with_lines(const Polygon2D& parent, std::span<const CutLine> lines);

/// Candidate cut lines: the extensions of both edges at every reflex vertex,
/// plus one random parallel translate per distinct edge direction.
std::vector<CutLine> candidate_cut_lines(const Polygon2D& parent, Rng& rng);

/// True when the cells share a boundary piece of positive length.
bool cells_adjacent(const Polygon2D& a, const Polygon2D& b);

/// m >= 2 pairwise disjoint children, each a union of adjacent arrangement
/// cells. Groups either share a boundary edge or keep apart; touching at a
/// single point is rejected.
std::vector<Polygon2D> bisect_children(const Polygon2D& parent, int m, const SynthConfig& cfg, Rng& rng);

struct SynthTree {
    double ground = 0.0;
    ArchTree tree;
    TreeTemplate shape = TreeTemplate::Single;
    /// Whole-tree restarts spent before success.
    int retries = 0;
};

/// A random tree of the configured shapes; every contour is on the
/// quantization lattice and validator-passing. Throws GenerationError once
/// cfg.tree_retries is exhausted.
SynthTree synth_tree(const SynthConfig& cfg, Rng& rng, std::span<const Polygon2D> pool = {});

} // namespace archprog
