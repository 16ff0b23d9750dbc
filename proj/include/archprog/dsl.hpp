/// @file dsl.hpp
/// @brief Architectural program AST, architectural tree, text syntax.
///
/// A Program is one ground statement followed by CreateLayer statements in
/// breadth-first order of the layer tree. Its text form is
///
///     ground = -0.25
///     L1 = layer(parent=Φ, h=0.50, c=[(-0.50,-0.50),(0.50,-0.50),(0.50,0.50)])
///     L2 = layer(parent=L1, h=0.30, c=[...])
///
/// `Phi` is accepted for `Φ` and `#` starts a comment.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "archprog/geometry.hpp"

namespace archprog {

/// Parent reference of a layer statement: 0 is the ground Φ, k >= 1 is layer L_k.
using LayerLabel = int;
inline constexpr LayerLabel kGround = 0;

struct LayerStatement {
    LayerLabel label = 1;
    LayerLabel parent = kGround;
    double height = 0.0;
    Polygon2D contour;

    friend bool operator==(const LayerStatement&, const LayerStatement&) = default;
};

struct Program {
    double ground = 0.0;
    std::vector<LayerStatement> layers;

    friend bool operator==(const Program&, const Program&) = default;

    const LayerStatement& layer(LayerLabel label) const { return layers[static_cast<std::size_t>(label - 1)]; }
};

struct ArchNode {
    double height = 0.0;
    Polygon2D contour;
    /// Indices into ArchTree::nodes, in stored child order.
    std::vector<std::size_t> children;

    friend bool operator==(const ArchNode&, const ArchNode&) = default;
};

/// Rooted forest under the virtual ground node Φ.
struct ArchTree {
    std::vector<ArchNode> nodes;
    /// Children of Φ.
    std::vector<std::size_t> roots;

    friend bool operator==(const ArchTree&, const ArchTree&) = default;

    /// Parent index of every node (-1 for roots); throws StructureError unless a forest.
    std::vector<std::ptrdiff_t> parents() const;
    /// Depth of each node; roots have depth 1.
    std::vector<int> depths() const;
};

Program parse_program(std::string_view text);
/// Canonical text with two-decimal scalars. With `exact`, a scalar that
/// two decimals would change is written with as many digits as it needs to
/// parse back to the same double.
std::string print_program(const Program& p, bool exact = false);
/// Scalar rendering used by print_program.
std::string format_scalar(double v, bool exact = false);

struct TreeForm {
    double ground = 0.0;
    ArchTree tree;
};

TreeForm program_to_tree(const Program& p);
Program tree_to_program(double ground, const ArchTree& tree);

struct Diagnostic {
    /// 0 for the ground statement.
    LayerLabel statement = 0;
    std::string rule;

    std::string to_string() const;
};

std::vector<Diagnostic> validate_program(const Program& p);

} // namespace archprog
